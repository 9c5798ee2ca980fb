/**
 * @file scenario.hpp
 * @brief End-to-end pipeline: synthesize the network, generate calls, run.
 */
#pragma once

#include <vector>

#include "escs/arrivals.hpp"
#include "escs/config.hpp"
#include "escs/graph.hpp"
#include "escs/metrics.hpp"
#include "escs/records.hpp"

namespace escs {

struct ScenarioRun {
    EscsGraph graph;
    std::vector<CallEvent> events;
    SimulationResult result;
    Summary summary;
};

/// `config` with calls_per_hour replaced by `calls_per_hour` and rates re-derived.
ProjectConfig at_rate(ProjectConfig config, double calls_per_hour);

ScenarioRun run_scenario(const ProjectConfig& config);

/// base * (1 + increment)^k for k = 0..steps.
std::vector<double> rate_ladder(double base, double increment, int steps);

}  // namespace escs
