#include "escs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {

std::size_t utilization_bin(int busy, int capacity) {
    if (capacity <= 0 || busy <= 0) return 0;
    const auto bin = static_cast<std::size_t>((10LL * busy) / capacity);
    return std::min(bin, kHistogramBins - 1);
}

bool above_80(int busy, int capacity) {
    return capacity > 0 && 5LL * busy > 4LL * capacity;
}

double nearest_rank(const std::vector<double>& sorted, double percent) {
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Sums the busy counts of several run-length series step by step and calls
// visit(busy, capacity, length) for each maximal stretch with constant sum.
template <class Visit>
void sweep(const std::vector<const UtilizationSeries*>& series, std::int64_t steps, Visit visit) {
    int capacity = 0;
    for (const auto* s : series) capacity += s->capacity;
    std::vector<std::size_t> cursor(series.size(), 0);
    std::int64_t t = 0;
    while (t < steps) {
        int busy = 0;
        std::int64_t next = steps;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const auto& runs = series[k]->runs;
            while (cursor[k] < runs.size() && runs[cursor[k]].start_step + runs[cursor[k]].steps <= t) {
                ++cursor[k];
            }
            if (cursor[k] >= runs.size() || runs[cursor[k]].start_step > t) {
                // gap in the series: treat as idle until the next run starts
                if (cursor[k] < runs.size()) next = std::min(next, runs[cursor[k]].start_step);
                continue;
            }
            const UtilizationRun& r = runs[cursor[k]];
            busy += r.busy;
            next = std::min(next, r.start_step + r.steps);
        }
        visit(busy, capacity, next - t);
        t = next;
    }
}

double mean_utilization(const SimulationResult& result, VertexKind kind) {
    double busy_steps = 0.0;
    double capacity_steps = 0.0;
    for (const auto& s : result.utilization) {
        if (s.kind != kind) continue;
        for (const auto& r : s.runs) busy_steps += static_cast<double>(r.busy) * static_cast<double>(r.steps);
        capacity_steps += static_cast<double>(s.capacity) * static_cast<double>(result.steps);
    }
    return ratio(busy_steps, capacity_steps);
}

}  // namespace

Summary summarize(const SimulationResult& result) {
    Summary s;
    s.injected = result.injected;
    s.in_system_at_end = result.in_system_at_end;
    s.redials = result.redials;
    s.total_calls = result.calls.size();
    s.steps = result.steps;

    std::vector<double> served_waits;
    double offered_wait_sum = 0.0;
    std::uint64_t within_15 = 0;
    std::uint64_t within_20 = 0;
    double response_sum = 0.0;
    for (const CallRecord& r : result.calls) {
        switch (r.disposition) {
        case Disposition::Served:
            ++s.served;
            served_waits.push_back(r.wait);
            if (r.wait <= 15.0) ++within_15;
            if (r.wait <= 20.0) ++within_20;
            break;
        case Disposition::Abandoned: ++s.abandoned; break;
        case Disposition::Blocked:
            ++s.blocked;
            if (!r.redialed) ++s.blocked_not_redialed;
            break;
        }
        if (r.disposition != Disposition::Blocked) offered_wait_sum += r.wait;
        if (r.response_time) {
            response_sum += *r.response_time;
            ++s.responses;
        }
    }
    const auto total = static_cast<double>(s.total_calls);
    const auto offered = static_cast<double>(s.served + s.abandoned);
    s.served_fraction = ratio(static_cast<double>(s.served), total);
    s.abandoned_fraction = ratio(static_cast<double>(s.abandoned), total);
    s.blocked_fraction = ratio(static_cast<double>(s.blocked), total);
    s.abandonment_rate = ratio(static_cast<double>(s.abandoned), offered);

    double served_sum = 0.0;
    for (double w : served_waits) served_sum += w;
    s.mean_wait = ratio(served_sum, static_cast<double>(served_waits.size()));
    s.mean_wait_offered = ratio(offered_wait_sum, offered);
    std::sort(served_waits.begin(), served_waits.end());
    s.wait_p50 = nearest_rank(served_waits, 50);
    s.wait_p90 = nearest_rank(served_waits, 90);
    s.wait_p95 = nearest_rank(served_waits, 95);
    s.wait_p99 = nearest_rank(served_waits, 99);
    s.answered_within_15 = ratio(static_cast<double>(within_15), offered);
    s.answered_within_20 = ratio(static_cast<double>(within_20), offered);
    s.mean_response_time = ratio(response_sum, static_cast<double>(s.responses));

    std::vector<const UtilizationSeries*> psaps;
    for (const auto& u : result.utilization) {
        if (u.kind == VertexKind::Psap) psaps.push_back(&u);
    }
    if (result.steps > 0 && !psaps.empty()) {
        std::array<std::int64_t, kHistogramBins> counts{};
        std::int64_t high = 0;
        sweep(psaps, result.steps, [&](int busy, int capacity, std::int64_t length) {
            counts[utilization_bin(busy, capacity)] += length;
            if (above_80(busy, capacity)) high += length;
        });
        const auto steps = static_cast<double>(result.steps);
        for (std::size_t b = 0; b < kHistogramBins; ++b) {
            s.psap_histogram[b] = static_cast<double>(counts[b]) / steps;
        }
        s.time_above_80 = static_cast<double>(high) / steps;
    } else {
        s.psap_histogram[0] = 1.0;
    }
    s.mean_psap_utilization = mean_utilization(result, VertexKind::Psap);
    s.mean_responder_utilization = mean_utilization(result, VertexKind::Responder);
    return s;
}

std::vector<std::pair<std::string, std::string>> Summary::rows() const {
    std::vector<std::pair<std::string, std::string>> out = {
        {"total_calls", fmt::format("{}", total_calls)},
        {"served", fmt::format("{}", served)},
        {"abandoned", fmt::format("{}", abandoned)},
        {"blocked", fmt::format("{}", blocked)},
        {"blocked_not_redialed", fmt::format("{}", blocked_not_redialed)},
        {"redials", fmt::format("{}", redials)},
        {"injected", fmt::format("{}", injected)},
        {"in_system_at_end", fmt::format("{}", in_system_at_end)},
        {"served_fraction", fmt::format("{}", served_fraction)},
        {"abandoned_fraction", fmt::format("{}", abandoned_fraction)},
        {"blocked_fraction", fmt::format("{}", blocked_fraction)},
        {"abandonment_rate", fmt::format("{}", abandonment_rate)},
        {"mean_wait", fmt::format("{}", mean_wait)},
        {"mean_wait_offered", fmt::format("{}", mean_wait_offered)},
        {"wait_p50", fmt::format("{}", wait_p50)},
        {"wait_p90", fmt::format("{}", wait_p90)},
        {"wait_p95", fmt::format("{}", wait_p95)},
        {"wait_p99", fmt::format("{}", wait_p99)},
        {"answered_within_15", fmt::format("{}", answered_within_15)},
        {"answered_within_20", fmt::format("{}", answered_within_20)},
        {"mean_response_time", fmt::format("{}", mean_response_time)},
        {"responses", fmt::format("{}", responses)},
        {"steps", fmt::format("{}", steps)},
    };
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
        out.emplace_back(fmt::format("psap_util_bin_{}", b), fmt::format("{}", psap_histogram[b]));
    }
    out.emplace_back("time_above_80", fmt::format("{}", time_above_80));
    out.emplace_back("mean_psap_utilization", fmt::format("{}", mean_psap_utilization));
    out.emplace_back("mean_responder_utilization", fmt::format("{}", mean_responder_utilization));
    return out;
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
    return v ? fmt::format("{}", *v) : std::string{};
}

std::ofstream open(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot write {}", path.string()));
    return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path) {
    f.flush();
    if (!f) throw Error(fmt::format("write failed: {}", path.string()));
}

}  // namespace

void write_csv(const SimulationResult& result, const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw Error(fmt::format("cannot create {}: {}", directory.string(), ec.message()));

    const auto calls_path = directory / "calls.csv";
    auto calls = open(calls_path);
    calls << "call_id,original_call_id,region,psap,type,time,arrival_step,answer_step,wait,"
             "disposition,redialed,patience,service_duration,completion_step,responder,"
             "dispatch_step,on_scene_time,response_time\n";
    for (const CallRecord& r : result.calls) {
        calls << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.id,
                             r.original_id, r.region, r.psap, to_string(r.type), r.time,
                             r.arrival_step, opt(r.answer_step), r.wait, to_string(r.disposition),
                             r.redialed ? 1 : 0, r.patience, r.service_duration,
                             opt(r.completion_step), opt(r.responder), opt(r.dispatch_step),
                             opt(r.on_scene_time), opt(r.response_time));
    }
    finish(calls, calls_path);

    const auto util_path = directory / "utilization.csv";
    auto util = open(util_path);
    util << "vertex,kind,capacity,start_step,steps,busy,utilization\n";
    std::vector<const UtilizationSeries*> series;
    for (const auto& s : result.utilization) series.push_back(&s);
    std::stable_sort(series.begin(), series.end(),
                     [](const auto* a, const auto* b) { return a->vertex < b->vertex; });
    for (const auto* s : series) {
        for (const auto& r : s->runs) {
            const double u = s->capacity > 0 ? static_cast<double>(r.busy) / s->capacity : 0.0;
            util << fmt::format("{},{},{},{},{},{},{}\n", s->vertex, to_string(s->kind), s->capacity,
                                r.start_step, r.steps, r.busy, u);
        }
    }
    finish(util, util_path);

    const auto summary_path = directory / "summary.csv";
    auto summary = open(summary_path);
    summary << "metric,value\n";
    for (const auto& [name, value] : summarize(result).rows()) summary << name << ',' << value << '\n';
    finish(summary, summary_path);
}

std::string format_summary(const Summary& s) {
    std::string out;
    auto line = [&](std::string_view name, const std::string& value) {
        fmt::format_to(std::back_inserter(out), "{:<28} {:>14}\n", name, value);
    };
    line("calls (attempts)", fmt::format("{}", s.total_calls));
    line("served", fmt::format("{} ({:.2f}%)", s.served, 100 * s.served_fraction));
    line("abandoned", fmt::format("{} ({:.2f}%)", s.abandoned, 100 * s.abandoned_fraction));
    line("blocked", fmt::format("{} ({:.2f}%)", s.blocked, 100 * s.blocked_fraction));
    line("redials", fmt::format("{}", s.redials));
    line("in system at end", fmt::format("{}", s.in_system_at_end));
    line("abandonment rate", fmt::format("{:.2f}%", 100 * s.abandonment_rate));
    line("mean wait (served)", fmt::format("{:.2f} s", s.mean_wait));
    line("wait p50 / p90", fmt::format("{:.0f} / {:.0f} s", s.wait_p50, s.wait_p90));
    line("wait p95 / p99", fmt::format("{:.0f} / {:.0f} s", s.wait_p95, s.wait_p99));
    line("answered within 15 s", fmt::format("{:.2f}%", 100 * s.answered_within_15));
    line("answered within 20 s", fmt::format("{:.2f}%", 100 * s.answered_within_20));
    line("mean response time", fmt::format("{:.1f} s", s.mean_response_time));
    line("PSAP utilization (mean)", fmt::format("{:.2f}%", 100 * s.mean_psap_utilization));
    line("responder utilization", fmt::format("{:.2f}%", 100 * s.mean_responder_utilization));
    line("time above 80% busy", fmt::format("{:.2f}%", 100 * s.time_above_80));
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
        line(fmt::format("  util [{:.1f},{:.1f}{}", b / 10.0, (b + 1) / 10.0, b + 1 == kHistogramBins ? "]" : ")"),
             fmt::format("{:.4f}", s.psap_histogram[b]));
    }
    return out;
}

}  // namespace escs
