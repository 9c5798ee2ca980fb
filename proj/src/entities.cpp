#include "escs/entities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "escs/error.hpp"
#include "escs/models.hpp"

namespace escs {

std::string_view to_string(Disposition d) {
    switch (d) {
    case Disposition::Served: return "SERVED";
    case Disposition::Abandoned: return "ABANDONED";
    case Disposition::Blocked: return "BLOCKED";
    }
    return "?";
}

std::int64_t due_step(std::int64_t time, double step_duration) {
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(time) / step_duration));
}

namespace {

// Min-heap order on (due step, call id).
bool later(const CallerRegionState::Pending& a, const CallerRegionState::Pending& b) {
    return a.due_step != b.due_step ? a.due_step > b.due_step : a.call.id > b.call.id;
}

double seconds(std::int64_t steps, const StepContext& ctx) {
    return static_cast<double>(steps) * ctx.config->step_duration;
}

}  // namespace

// --- caller region ---------------------------------------------------------

void CallerRegionState::enqueue(const CallEvent& call, std::int64_t due) {
    pending.push_back({due, call});
    std::push_heap(pending.begin(), pending.end(), later);
}

void caller_region_step(CallerRegionState& state, std::span<const Message> inbox,
                        const StepContext& ctx, Rng& rng, Outbox& out) {
    for (const Message& m : inbox) {
        if (m.kind != MessageKind::BusySignal && m.kind != MessageKind::AbandonNotice) continue;
        if (!sample_redial(ctx.config->redial_probability, rng)) continue;
        CallEvent retry = m.call;
        retry.id = m.call.id + kRedialIdStride;
        retry.time = static_cast<std::int64_t>(std::floor(seconds(ctx.step + 1, ctx)));
        state.enqueue(retry, ctx.step + 1);
        state.redialed.push_back(m.call.id);
    }

    if (state.pending.empty() || state.pending.front().due_step > ctx.step) return;
    std::pop_heap(state.pending.begin(), state.pending.end(), later);
    const CallEvent call = state.pending.back().call;
    state.pending.pop_back();
    out.push_back({state.call_edge, Lane::Forward,
                   Message{MessageKind::Call, state.id, state.psap, ctx.step, state.call_edge, call}});
}

// --- PSAP ------------------------------------------------------------------

int PsapState::busy_servers() const {
    return static_cast<int>(
        std::count_if(servers.begin(), servers.end(), [](const Server& s) { return s.busy; }));
}

void PsapState::reject(const Message& call, std::size_t edge, const StepContext& ctx, Outbox& out) {
    CallRecord r;
    r.id = call.call.id;
    r.original_id = call.call.original_id;
    r.region = call.call.region;
    r.psap = id;
    r.type = call.call.type;
    r.time = call.call.time;
    r.arrival_step = ctx.step;
    r.disposition = Disposition::Blocked;
    r.patience = call.call.patience;
    r.service_duration = call.call.service_duration;
    records.push_back(r);
    out.push_back({edge, Lane::Reverse,
                   Message{MessageKind::BusySignal, id, call.src, ctx.step, edge, call.call}});
}

const DispatchTarget& PsapState::select_target(GeoPoint incident, CallType type) const {
    const DispatchTarget* best = nullptr;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const DispatchTarget& t : targets) {
        if (!t.capabilities.contains(type)) continue;
        const double d = distance(t.location, incident);
        if (d < best_distance) {  // targets are id-sorted, so ties keep the lowest id
            best = &t;
            best_distance = d;
        }
    }
    if (!best) {
        throw Error(fmt::format("PSAP {}: no reachable responder for {} calls", id, to_string(type)));
    }
    return *best;
}

void psap_step(PsapState& state, std::span<const Message> inbox, const StepContext& ctx,
               Outbox& out) {
    const double now = ctx.now();
    const SimulationConfig& cfg = *ctx.config;

    // (a) completions, each followed by a dispatch to the nearest capable responder
    for (auto& server : state.servers) {
        if (!server.busy || server.busy_until > now) continue;
        server.busy = false;
        CallRecord& r = server.record;
        r.completion_step = ctx.step;
        const DispatchTarget& target = state.select_target(server.call.location, server.call.type);
        r.responder = target.responder;
        r.dispatch_step = ctx.step;
        out.push_back({target.edge, Lane::Forward,
                       Message{MessageKind::Dispatch, state.id, target.responder, ctx.step,
                               target.edge, server.call}});
        state.records.push_back(r);
    }

    // (b) arrivals take a trunk if one is free
    for (const Message& m : inbox) {
        if (m.kind == MessageKind::UnitAvailable) {
            ++state.status_messages;
        } else if (m.kind == MessageKind::Call) {
            if (state.in_system() < state.trunks) {
                state.queue.push_back({m.call, ctx.step, m.edge});
            } else {
                state.reject(m, m.edge, ctx, out);
            }
        }
    }

    // (c) abandonment, evaluated before new assignments
    const auto expired = [&](const PsapState::Queued& q) {
        return seconds(ctx.step - q.arrival_step, ctx) >= q.call.patience;
    };
    if (cfg.abandonment && std::any_of(state.queue.begin(), state.queue.end(), expired)) {
        std::deque<PsapState::Queued> kept;
        for (const PsapState::Queued& q : state.queue) {
            if (!expired(q)) {
                kept.push_back(q);
                continue;
            }
            const double wait = seconds(ctx.step - q.arrival_step, ctx);
            CallRecord r;
            r.id = q.call.id;
            r.original_id = q.call.original_id;
            r.region = q.call.region;
            r.psap = state.id;
            r.type = q.call.type;
            r.time = q.call.time;
            r.arrival_step = q.arrival_step;
            r.wait = wait;
            r.disposition = Disposition::Abandoned;
            r.patience = q.call.patience;
            r.service_duration = q.call.service_duration;
            state.records.push_back(r);
            if (cfg.redial_after_abandon) {
                out.push_back({q.edge, Lane::Reverse,
                               Message{MessageKind::AbandonNotice, state.id, q.call.region,
                                       ctx.step, q.edge, q.call}});
            }
        }
        state.queue = std::move(kept);
    }

    // (d) FIFO assignment to free servers
    for (auto& server : state.servers) {
        if (state.queue.empty()) break;
        if (server.busy) continue;
        const PsapState::Queued q = state.queue.front();
        state.queue.pop_front();
        server.busy = true;
        server.busy_until = now + q.call.service_duration;
        server.call = q.call;
        CallRecord& r = server.record;
        r = CallRecord{};
        r.id = q.call.id;
        r.original_id = q.call.original_id;
        r.region = q.call.region;
        r.psap = state.id;
        r.type = q.call.type;
        r.time = q.call.time;
        r.arrival_step = q.arrival_step;
        r.answer_step = ctx.step;
        r.wait = seconds(ctx.step - q.arrival_step, ctx);
        r.disposition = Disposition::Served;
        r.patience = q.call.patience;
        r.service_duration = q.call.service_duration;
    }
}

// --- responder -------------------------------------------------------------

int ResponderState::busy_units() const {
    return static_cast<int>(
        std::count_if(units.begin(), units.end(), [](const Unit& u) { return u.busy; }));
}

void responder_step(ResponderState& state, std::span<const Message> inbox, const StepContext& ctx,
                    Outbox& out) {
    const double now = ctx.now();

    for (auto& unit : state.units) {
        if (!unit.busy || unit.busy_until > now) continue;
        unit.busy = false;
        for (const auto& [psap, edge] : state.status_edges) {
            if (psap != unit.psap) continue;
            out.push_back({edge, Lane::Forward,
                           Message{MessageKind::UnitAvailable, state.id, psap, ctx.step, edge,
                                   unit.call}});
            break;
        }
    }

    for (const Message& m : inbox) {
        if (m.kind == MessageKind::Dispatch) state.queue.push_back({m, ctx.step});
    }

    for (auto& unit : state.units) {
        if (state.queue.empty()) break;
        if (unit.busy) continue;
        const ResponderState::Waiting w = state.queue.front();
        state.queue.pop_front();
        const CallEvent& call = w.dispatch.call;

        DispatchRecord r;
        r.call = call.id;
        r.responder = state.id;
        r.psap = w.dispatch.src;
        r.received_step = w.received_step;
        r.start_step = ctx.step;
        r.travel_time = driving_time(state.location, call.location, ctx.config->responder_speed);
        r.on_scene_duration = call.on_scene_duration;
        r.on_scene_time = now + r.travel_time;
        r.clear_time = r.on_scene_time + r.on_scene_duration;
        state.records.push_back(r);

        unit.busy = true;
        unit.busy_until = r.clear_time;
        unit.psap = w.dispatch.src;
        unit.call = call;
    }
}

}  // namespace escs
