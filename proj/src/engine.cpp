#include "escs/engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {

Engine::Engine(const EscsGraph& graph, std::span<const CallEvent> events, SimulationConfig config)
    : graph_(&graph), config_(std::move(config)) {
    config_.validate();
    const std::size_t n = graph.size();
    slots_.reserve(n);
    rngs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& v = graph.vertices()[i];
        rngs_.push_back(make_stream(config_.seed, kVertexStreamBase + static_cast<std::uint64_t>(v.id)));
        switch (v.kind) {
        case VertexKind::CallerRegion: {
            CallerRegionState s;
            s.id = v.id;
            s.call_edge = graph.call_edge(i);
            s.psap = graph.edges()[s.call_edge].dst;
            slots_.push_back({v.kind, regions_.size()});
            regions_.push_back(std::move(s));
            break;
        }
        case VertexKind::Psap: {
            PsapState s;
            s.id = v.id;
            s.trunks = v.trunks;
            s.servers.resize(static_cast<std::size_t>(v.servers));
            for (std::size_t e : graph.out_edges(i)) {
                const Edge& edge = graph.edges()[e];
                if (edge.semantic != EdgeSemantic::Dispatch) continue;
                const Vertex& r = graph.vertex(edge.dst);
                s.targets.push_back({r.id, r.location, r.capabilities, e});
            }
            std::sort(s.targets.begin(), s.targets.end(),
                      [](const auto& a, const auto& b) { return a.responder < b.responder; });
            slots_.push_back({v.kind, psaps_.size()});
            psaps_.push_back(std::move(s));
            utilization_.push_back({v.id, v.kind, v.servers, {}});
            utilization_vertex_.push_back(i);
            break;
        }
        case VertexKind::Responder: {
            ResponderState s;
            s.id = v.id;
            s.location = v.location;
            s.units.resize(static_cast<std::size_t>(v.units));
            for (std::size_t e : graph.out_edges(i)) {
                const Edge& edge = graph.edges()[e];
                if (edge.semantic == EdgeSemantic::Status) s.status_edges.emplace_back(edge.dst, e);
            }
            slots_.push_back({v.kind, responders_.size()});
            responders_.push_back(std::move(s));
            utilization_.push_back({v.id, v.kind, v.units, {}});
            utilization_vertex_.push_back(i);
            break;
        }
        }
    }

    epoch_source_.resize(regions_.size());
    epoch_cursor_.assign(regions_.size(), 0);
    for (std::size_t k = 0; k < events.size(); ++k) {
        const CallEvent& e = events[k];
        const auto idx = graph.index_of(e.region);
        if (!idx || slots_[*idx].kind != VertexKind::CallerRegion) {
            throw Error(fmt::format("event #{} (call {}): vertex {} is not a caller region", k, e.id,
                                    e.region));
        }
        if (e.id >= kRedialIdStride) {
            throw Error(fmt::format("event #{}: call id {} out of range", k, e.id));
        }
        epoch_source_[slots_[*idx].state].push_back(e);
    }
    const double dt = config_.step_duration;
    for (auto& source : epoch_source_) {
        std::stable_sort(source.begin(), source.end(), [dt](const CallEvent& a, const CallEvent& b) {
            const auto da = due_step(a.time, dt);
            const auto db = due_step(b.time, dt);
            return da != db ? da < db : a.id < b.id;
        });
    }
    injected_ = events.size();

    inbox_.resize(n);
    mail_.assign(n, 0);
    forward_.resize(graph.edges().size());
    reverse_.resize(graph.edges().size());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void Engine::set_processing_order(std::vector<std::size_t> order) {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
        if (check[i] != i) throw Error("processing order is not a permutation of the vertices");
    }
    if (check.size() != slots_.size()) throw Error("processing order has the wrong length");
    order_ = std::move(order);
}

void Engine::load_epoch() {
    const std::int64_t end = step_ + config_.epoch_length;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        auto& source = epoch_source_[r];
        auto& cursor = epoch_cursor_[r];
        while (cursor < source.size()) {
            const std::int64_t due = due_step(source[cursor].time, config_.step_duration);
            if (due >= end) break;
            regions_[r].enqueue(source[cursor], due);
            ++cursor;
        }
    }
}

void Engine::route(Outbox& out) {
    for (Outgoing& o : out) {
        Channel& ch = channel(o.edge, o.lane);
        if (ch.staged.empty()) dirty_.emplace_back(o.edge, o.lane);
        o.message.edge = o.edge;
        ch.staged.push_back(std::move(o.message));
    }
    out.clear();
}

void Engine::begin_step() {
    if (step_ % config_.epoch_length == 0) load_epoch();
    for (const auto& [edge, lane] : dirty_) {
        Channel& ch = channel(edge, lane);
        std::swap(ch.visible, ch.staged);
        ch.staged.clear();
        const Edge& e = graph_->edges()[edge];
        const VertexId reader = lane == Lane::Forward ? e.dst : e.src;
        mail_[graph_->require_index(reader)] = 1;
    }
    dirty_.clear();
}

void Engine::pull(std::size_t v) {
    auto& inbox = inbox_[v];
    const Slot slot = slots_[v];
    const StepContext ctx{step_, &config_};
    int calls = 0;
    for (std::size_t e : graph_->in_edges(v)) {
        Channel& ch = forward_[e];
        for (Message& m : ch.visible) {
            m.edge = e;
            if (slot.kind == VertexKind::Psap && m.kind == MessageKind::Call) {
                PsapState& psap = psaps_[slot.state];
                if (calls >= psap.trunks) {
                    psap.reject(m, e, ctx, scratch_);
                    route(scratch_);
                    continue;
                }
                ++calls;
            }
            inbox.push_back(std::move(m));
        }
        ch.visible.clear();
    }
    for (std::size_t e : graph_->out_edges(v)) {
        Channel& ch = reverse_[e];
        for (Message& m : ch.visible) {
            m.edge = e;
            inbox.push_back(std::move(m));
        }
        ch.visible.clear();
    }
}

void Engine::communication_phase() {
    for (std::size_t v : order_) {
        if (!mail_[v]) continue;
        mail_[v] = 0;
        pull(v);
    }
}

void Engine::transition_phase() {
    const StepContext ctx{step_, &config_};
    for (std::size_t v : order_) {
        const Slot slot = slots_[v];
        auto& inbox = inbox_[v];
        switch (slot.kind) {
        case VertexKind::CallerRegion: {
            CallerRegionState& s = regions_[slot.state];
            if (inbox.empty() && (s.pending.empty() || s.pending.front().due_step > step_)) continue;
            caller_region_step(s, inbox, ctx, rngs_[v], scratch_);
            break;
        }
        case VertexKind::Psap: psap_step(psaps_[slot.state], inbox, ctx, scratch_); break;
        case VertexKind::Responder:
            responder_step(responders_[slot.state], inbox, ctx, scratch_);
            break;
        }
        route(scratch_);
        inbox.clear();
    }
}

void Engine::end_step() {
    for (std::size_t k = 0; k < utilization_.size(); ++k) {
        const Slot slot = slots_[utilization_vertex_[k]];
        const int busy = slot.kind == VertexKind::Psap ? psaps_[slot.state].busy_servers()
                                                       : responders_[slot.state].busy_units();
        utilization_[k].record(step_, busy);
    }
    ++step_;
}

void Engine::step() {
    begin_step();
    communication_phase();
    transition_phase();
    end_step();
}

void Engine::run() {
    while (!done()) step();
}

std::uint64_t Engine::in_system() const {
    std::uint64_t count = 0;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        count += regions_[r].pending.size();
        count += epoch_source_[r].size() - epoch_cursor_[r];
    }
    const auto calls_in = [](const std::vector<Message>& messages) {
        return static_cast<std::uint64_t>(std::count_if(
            messages.begin(), messages.end(), [](const Message& m) { return m.kind == MessageKind::Call; }));
    };
    for (const Channel& ch : forward_) count += calls_in(ch.visible) + calls_in(ch.staged);
    for (std::size_t v = 0; v < slots_.size(); ++v) {
        if (slots_[v].kind == VertexKind::Psap) count += calls_in(inbox_[v]);
    }
    for (const PsapState& p : psaps_) {
        count += p.queue.size() + static_cast<std::uint64_t>(p.busy_servers());
    }
    return count;
}

SimulationResult Engine::result() const {
    SimulationResult out;
    out.steps = step_;
    out.step_duration = config_.step_duration;
    out.injected = injected_;
    out.in_system_at_end = in_system();

    std::unordered_set<CallId> redialed;
    for (const CallerRegionState& r : regions_) {
        redialed.insert(r.redialed.begin(), r.redialed.end());
        out.redials += r.redialed.size();
    }
    for (const ResponderState& r : responders_) {
        out.dispatches.insert(out.dispatches.end(), r.records.begin(), r.records.end());
    }
    std::sort(out.dispatches.begin(), out.dispatches.end(),
              [](const DispatchRecord& a, const DispatchRecord& b) { return a.call < b.call; });
    std::unordered_map<CallId, const DispatchRecord*> by_call;
    for (const DispatchRecord& d : out.dispatches) by_call.emplace(d.call, &d);

    for (const PsapState& p : psaps_) {
        for (CallRecord r : p.records) {
            r.redialed = redialed.contains(r.id);
            if (const auto it = by_call.find(r.id); it != by_call.end()) {
                r.on_scene_time = it->second->on_scene_time;
                r.response_time = it->second->on_scene_time - static_cast<double>(r.time);
            }
            out.calls.push_back(r);
        }
    }
    std::sort(out.calls.begin(), out.calls.end(),
              [](const CallRecord& a, const CallRecord& b) { return a.id < b.id; });
    out.utilization = utilization_;
    return out;
}

namespace {

void dump(std::string& s, const CallEvent& c) {
    fmt::format_to(std::back_inserter(s), "[{} {} {} {} {} {} {} {} {} {}]", c.id, c.original_id,
                   c.region, c.time, c.location.x, c.location.y, to_string(c.type),
                   c.service_duration, c.patience, c.on_scene_duration);
}

void dump(std::string& s, const Message& m) {
    fmt::format_to(std::back_inserter(s), "<{} {} {} {} {} ", static_cast<int>(m.kind), m.src, m.dst,
                   m.sent_step, m.edge);
    dump(s, m.call);
    s += '>';
}

void dump(std::string& s, const CallRecord& r) {
    fmt::format_to(std::back_inserter(s), "{{{} {} {} {} {} {} {} {} {} {} {} {} {} {} {} {} {}}}",
                   r.id, r.original_id, r.region, r.psap, to_string(r.type), r.time,
                   r.arrival_step, r.answer_step.value_or(-1), r.wait, to_string(r.disposition),
                   r.redialed, r.patience, r.service_duration, r.completion_step.value_or(-1),
                   r.responder.value_or(-1), r.dispatch_step.value_or(-1),
                   r.on_scene_time.value_or(-1.0));
}

}  // namespace

std::string Engine::state_digest() const {
    std::string s;
    fmt::format_to(std::back_inserter(s), "step {}\n", step_);
    for (std::size_t v = 0; v < slots_.size(); ++v) {
        const Slot slot = slots_[v];
        fmt::format_to(std::back_inserter(s), "vertex {} ", graph_->vertices()[v].id);
        switch (slot.kind) {
        case VertexKind::CallerRegion: {
            const CallerRegionState& r = regions_[slot.state];
            auto pending = r.pending;
            std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
                return a.due_step != b.due_step ? a.due_step < b.due_step : a.call.id < b.call.id;
            });
            s += "CALR pending";
            for (const auto& p : pending) {
                fmt::format_to(std::back_inserter(s), " {}:", p.due_step);
                dump(s, p.call);
            }
            s += " redialed";
            for (CallId id : r.redialed) fmt::format_to(std::back_inserter(s), " {}", id);
            break;
        }
        case VertexKind::Psap: {
            const PsapState& p = psaps_[slot.state];
            fmt::format_to(std::back_inserter(s), "PSAP status {} servers", p.status_messages);
            for (const auto& srv : p.servers) {
                fmt::format_to(std::back_inserter(s), " ({} {} ", srv.busy, srv.busy_until);
                if (srv.busy) dump(s, srv.record);
                s += ')';
            }
            s += " queue";
            for (const auto& q : p.queue) {
                fmt::format_to(std::back_inserter(s), " {}@{}/{}", q.call.id, q.arrival_step, q.edge);
            }
            s += " records";
            for (const auto& r : p.records) dump(s, r);
            break;
        }
        case VertexKind::Responder: {
            const ResponderState& r = responders_[slot.state];
            s += "RESP units";
            for (const auto& u : r.units) {
                fmt::format_to(std::back_inserter(s), " ({} {} {} {})", u.busy, u.busy_until, u.psap,
                               u.call.id);
            }
            s += " queue";
            for (const auto& w : r.queue) {
                fmt::format_to(std::back_inserter(s), " {}@{}", w.dispatch.call.id, w.received_step);
            }
            s += " records";
            for (const auto& d : r.records) {
                fmt::format_to(std::back_inserter(s), " {{{} {} {} {} {} {} {}}}", d.call, d.psap,
                               d.received_step, d.start_step, d.travel_time, d.on_scene_time,
                               d.clear_time);
            }
            break;
        }
        }
        std::ostringstream rng;
        rng << rngs_[v];
        fmt::format_to(std::back_inserter(s), " rng {:016x} inbox",
                       std::hash<std::string>{}(rng.str()));
        for (const Message& m : inbox_[v]) dump(s, m);
        s += '\n';
    }
    for (std::size_t e = 0; e < forward_.size(); ++e) {
        fmt::format_to(std::back_inserter(s), "edge {} fwd", e);
        for (const Message& m : forward_[e].visible) dump(s, m);
        s += " |";
        for (const Message& m : forward_[e].staged) dump(s, m);
        s += " rev";
        for (const Message& m : reverse_[e].visible) dump(s, m);
        s += " |";
        for (const Message& m : reverse_[e].staged) dump(s, m);
        s += '\n';
    }
    return s;
}

const CallerRegionState& Engine::caller_region(VertexId id) const {
    const Slot slot = slots_[graph_->require_index(id)];
    if (slot.kind != VertexKind::CallerRegion) throw Error("not a caller region");
    return regions_[slot.state];
}

const PsapState& Engine::psap(VertexId id) const {
    const Slot slot = slots_[graph_->require_index(id)];
    if (slot.kind != VertexKind::Psap) throw Error("not a PSAP");
    return psaps_[slot.state];
}

const ResponderState& Engine::responder(VertexId id) const {
    const Slot slot = slots_[graph_->require_index(id)];
    if (slot.kind != VertexKind::Responder) throw Error("not a responder");
    return responders_[slot.state];
}

std::span<const Message> Engine::inbox(VertexId id) const { return inbox_[graph_->require_index(id)]; }

std::span<const Message> Engine::staged(std::size_t edge, Lane lane) const {
    return lane == Lane::Forward ? forward_.at(edge).staged : reverse_.at(edge).staged;
}

SimulationResult run(const EscsGraph& graph, std::span<const CallEvent> events,
                     const SimulationConfig& config) {
    Engine engine(graph, events, config);
    engine.run();
    return engine.result();
}

}  // namespace escs
