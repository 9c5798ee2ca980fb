/**
 * @file metrics.hpp
 * @brief Summary statistics over a simulation result and CSV persistence.
 *
 * CSV schemas (all files have a header row, comma separated, no quoting):
 *
 * calls.csv, one row per call attempt, ordered by call id:
 *     call_id,original_call_id,region,psap,type,time,arrival_step,answer_step,wait,
 *     disposition,redialed,patience,service_duration,completion_step,responder,
 *     dispatch_step,on_scene_time,response_time
 * Optional fields are left empty when absent.
 *
 * utilization.csv, run-length encoded per-step busy counts, ordered by vertex
 * then start step. A row stands for `steps` consecutive steps with the same
 * count:
 *     vertex,kind,capacity,start_step,steps,busy,utilization
 *
 * summary.csv, one metric per row:
 *     metric,value
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "escs/records.hpp"

namespace escs {

inline constexpr std::size_t kHistogramBins = 10;

/// Bin of busy/capacity in [0,0.1), ..., [0.9,1.0]; exact integer arithmetic.
std::size_t utilization_bin(int busy, int capacity);
/// busy/capacity > 0.8, exactly.
bool above_80(int busy, int capacity);

struct Summary {
    std::uint64_t total_calls = 0;  ///< terminal attempts, including redials
    std::uint64_t served = 0;
    std::uint64_t abandoned = 0;
    std::uint64_t blocked = 0;
    std::uint64_t blocked_not_redialed = 0;
    std::uint64_t redials = 0;
    std::uint64_t injected = 0;
    std::uint64_t in_system_at_end = 0;
    double served_fraction = 0.0;
    double abandoned_fraction = 0.0;
    double blocked_fraction = 0.0;
    double abandonment_rate = 0.0;  ///< abandoned / (served + abandoned)

    double mean_wait = 0.0;            ///< over served calls, s
    double mean_wait_offered = 0.0;    ///< over served and abandoned calls, s
    double wait_p50 = 0.0;
    double wait_p90 = 0.0;
    double wait_p95 = 0.0;
    double wait_p99 = 0.0;
    double answered_within_15 = 0.0;  ///< of served + abandoned
    double answered_within_20 = 0.0;
    double mean_response_time = 0.0;
    std::uint64_t responses = 0;

    std::int64_t steps = 0;
    std::array<double, kHistogramBins> psap_histogram{};  ///< aggregated over all PSAPs
    double time_above_80 = 0.0;
    double mean_psap_utilization = 0.0;
    double mean_responder_utilization = 0.0;

    /// (name, formatted value) in summary.csv order.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> rows() const;
};

/// Nearest-rank percentile of `sorted` (ascending); 0 for an empty sample.
double nearest_rank(const std::vector<double>& sorted, double percent);

Summary summarize(const SimulationResult& result);

/// Writes calls.csv, utilization.csv and summary.csv into `directory`
/// (created if missing). Throws escs::Error on I/O failure.
void write_csv(const SimulationResult& result, const std::filesystem::path& directory);

/// Aligned two-column table of the summary.
std::string format_summary(const Summary& summary);

}  // namespace escs
