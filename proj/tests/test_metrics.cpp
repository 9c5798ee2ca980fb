#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "escs/metrics.hpp"

using namespace escs;

namespace {

CallRecord record(CallId id, double wait, Disposition d, bool redialed = false) {
    CallRecord r;
    r.id = id;
    r.original_id = id % kRedialIdStride;
    r.wait = wait;
    r.disposition = d;
    r.redialed = redialed;
    return r;
}

std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

}  // namespace

TEST(MetricsTest, BinsAndThreshold) {
    EXPECT_EQ(utilization_bin(0, 6), 0u);
    EXPECT_EQ(utilization_bin(1, 10), 1u);
    EXPECT_EQ(utilization_bin(5, 6), 8u);
    EXPECT_EQ(utilization_bin(6, 6), 9u);
    EXPECT_EQ(utilization_bin(9, 10), 9u);
    EXPECT_FALSE(above_80(4, 5));
    EXPECT_TRUE(above_80(5, 6));
    EXPECT_FALSE(above_80(8, 10));
    EXPECT_TRUE(above_80(9, 10));
}

TEST(MetricsTest, NearestRank) {
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    EXPECT_EQ(nearest_rank(v, 50), 5);
    EXPECT_EQ(nearest_rank(v, 90), 9);
    EXPECT_EQ(nearest_rank(v, 95), 10);
    EXPECT_EQ(nearest_rank(v, 0), 1);
    EXPECT_EQ(nearest_rank({}, 50), 0);
}

TEST(MetricsTest, SmallTrace) {
    SimulationResult r;
    r.steps = 10;
    r.injected = 4;
    r.calls = {record(0, 4.0, Disposition::Served), record(1, 6.0, Disposition::Served),
               record(2, 30.0, Disposition::Abandoned), record(3, 0.0, Disposition::Blocked)};
    UtilizationSeries s;
    s.vertex = 1;
    s.capacity = 2;
    s.runs = {{0, 4, 0}, {4, 3, 1}, {7, 3, 2}};
    r.utilization.push_back(s);

    const Summary m = summarize(r);
    EXPECT_EQ(m.total_calls, 4u);
    EXPECT_EQ(m.served, 2u);
    EXPECT_EQ(m.abandoned, 1u);
    EXPECT_EQ(m.blocked, 1u);
    EXPECT_EQ(m.blocked_not_redialed, 1u);
    EXPECT_DOUBLE_EQ(m.mean_wait, 5.0);
    EXPECT_DOUBLE_EQ(m.mean_wait_offered, 40.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.abandonment_rate, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.answered_within_15, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.psap_histogram[0], 0.4);
    EXPECT_DOUBLE_EQ(m.psap_histogram[5], 0.3);
    EXPECT_DOUBLE_EQ(m.psap_histogram[9], 0.3);
    EXPECT_DOUBLE_EQ(m.time_above_80, 0.3);
    EXPECT_DOUBLE_EQ(m.mean_psap_utilization, (3 * 0.5 + 3 * 1.0) / 10.0);
    EXPECT_EQ(m.in_system_at_end, 0u);
}

TEST(MetricsTest, PsapsAggregateToSystemUtilization) {
    SimulationResult r;
    r.steps = 4;
    UtilizationSeries a, b;
    a.vertex = 1;
    a.capacity = 2;
    a.runs = {{0, 2, 2}, {2, 2, 0}};
    b.vertex = 2;
    b.capacity = 3;
    b.runs = {{0, 1, 0}, {1, 3, 3}};
    r.utilization = {a, b};
    const Summary m = summarize(r);
    // per-step system load: 2/5, 5/5, 3/5, 3/5
    EXPECT_DOUBLE_EQ(m.psap_histogram[4], 0.25);
    EXPECT_DOUBLE_EQ(m.psap_histogram[9], 0.25);
    EXPECT_DOUBLE_EQ(m.psap_histogram[6], 0.5);
    EXPECT_DOUBLE_EQ(m.time_above_80, 0.25);
}

TEST(MetricsTest, EmptyResult) {
    const Summary m = summarize(SimulationResult{});
    EXPECT_EQ(m.total_calls, 0u);
    EXPECT_EQ(m.mean_wait, 0.0);
    EXPECT_EQ(m.abandonment_rate, 0.0);
    EXPECT_EQ(m.psap_histogram[0], 1.0);
    EXPECT_EQ(m.time_above_80, 0.0);

    const auto dir = std::filesystem::temp_directory_path() / "escs_metrics_empty";
    std::filesystem::remove_all(dir);
    write_csv(SimulationResult{}, dir);
    EXPECT_EQ(count_lines(dir / "calls.csv"), 1u);
    EXPECT_EQ(count_lines(dir / "utilization.csv"), 1u);
    EXPECT_EQ(count_lines(dir / "summary.csv"), 1u + m.rows().size());
    std::filesystem::remove_all(dir);
}

TEST(MetricsTest, CallsCsvHasOneRowPerAttempt) {
    SimulationResult r;
    r.steps = 1;
    r.injected = 1;
    r.redials = 2;
    r.calls = {record(5, 0, Disposition::Blocked, true), record(5 + kRedialIdStride, 0, Disposition::Blocked, true),
               record(5 + 2 * kRedialIdStride, 3, Disposition::Served)};
    const Summary m = summarize(r);
    EXPECT_EQ(m.total_calls, 3u);
    EXPECT_EQ(m.blocked_not_redialed, 0u);
    EXPECT_EQ(m.redials, 2u);

    const auto dir = std::filesystem::temp_directory_path() / "escs_metrics_rows";
    std::filesystem::remove_all(dir);
    write_csv(r, dir);
    EXPECT_EQ(count_lines(dir / "calls.csv"), 4u);
    std::ifstream in(dir / "calls.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("call_id,original_call_id,region,psap,type,time", 0), 0u);
    std::filesystem::remove_all(dir);
}

TEST(MetricsTest, WriteFailureThrows) {
    const auto file = std::filesystem::temp_directory_path() / "escs_metrics_file";
    std::ofstream(file) << "x";
    EXPECT_ANY_THROW(write_csv(SimulationResult{}, file / "sub"));
    std::filesystem::remove(file);
}
