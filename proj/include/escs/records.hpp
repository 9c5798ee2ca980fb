/**
 * @file records.hpp
 * @brief Per-call and per-dispatch records plus utilization series, as
 *        produced by a simulation run.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "escs/arrivals.hpp"
#include "escs/graph.hpp"

namespace escs {

enum class Disposition : std::uint8_t { Served, Abandoned, Blocked };

std::string_view to_string(Disposition d);

/// Terminal outcome of one call attempt at a PSAP.
struct CallRecord {
    CallId id = 0;
    CallId original_id = 0;
    VertexId region = 0;
    VertexId psap = 0;
    CallType type = CallType::Law;
    std::int64_t time = 0;          ///< dial time, s
    std::int64_t arrival_step = 0;  ///< step the PSAP saw the call
    std::optional<std::int64_t> answer_step;
    double wait = 0.0;  ///< s in queue (0 for blocked calls)
    Disposition disposition = Disposition::Served;
    bool redialed = false;  ///< a follow-up attempt was placed after this one
    double patience = 0.0;
    double service_duration = 0.0;
    std::optional<std::int64_t> completion_step;
    std::optional<VertexId> responder;
    std::optional<std::int64_t> dispatch_step;
    std::optional<double> on_scene_time;  ///< s since start, unit arrival at the incident
    std::optional<double> response_time;  ///< on_scene_time - time

    friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

struct DispatchRecord {
    CallId call = 0;
    VertexId responder = 0;
    VertexId psap = 0;
    std::int64_t received_step = 0;
    std::int64_t start_step = 0;
    double travel_time = 0.0;
    double on_scene_duration = 0.0;
    double on_scene_time = 0.0;  ///< start + travel, s since start
    double clear_time = 0.0;     ///< on_scene_time + on_scene_duration

    [[nodiscard]] double busy_time() const { return travel_time + on_scene_duration; }
    friend bool operator==(const DispatchRecord&, const DispatchRecord&) = default;
};

/// `steps` consecutive steps starting at `start_step` with `busy` resources in use.
struct UtilizationRun {
    std::int64_t start_step = 0;
    std::int64_t steps = 0;
    int busy = 0;

    friend bool operator==(const UtilizationRun&, const UtilizationRun&) = default;
};

/// Run-length encoded per-step busy counts of one PSAP (servers) or responder (units).
struct UtilizationSeries {
    VertexId vertex = 0;
    VertexKind kind = VertexKind::Psap;
    int capacity = 0;
    std::vector<UtilizationRun> runs;

    void record(std::int64_t step, int busy) {
        if (!runs.empty() && runs.back().busy == busy &&
            runs.back().start_step + runs.back().steps == step) {
            ++runs.back().steps;
        } else {
            runs.push_back({step, 1, busy});
        }
    }
    friend bool operator==(const UtilizationSeries&, const UtilizationSeries&) = default;
};

struct SimulationResult {
    std::int64_t steps = 0;
    double step_duration = 1.0;
    std::uint64_t injected = 0;          ///< calls in the input stream
    std::uint64_t in_system_at_end = 0;  ///< attempts not yet terminal when the run stopped
    std::uint64_t redials = 0;
    std::vector<CallRecord> calls;  ///< sorted by id
    std::vector<DispatchRecord> dispatches;  ///< sorted by call id
    std::vector<UtilizationSeries> utilization;  ///< sorted by vertex id

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

}  // namespace escs
