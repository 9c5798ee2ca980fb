#include "escs/scenario.hpp"

#include <cmath>

#include "escs/engine.hpp"
#include "escs/error.hpp"
#include "escs/synthesize.hpp"

namespace escs {

ProjectConfig at_rate(ProjectConfig config, double calls_per_hour) {
    config.calls_per_hour = calls_per_hour;
    config.resolve_rates();
    return config;
}

ScenarioRun run_scenario(const ProjectConfig& config) {
    ProjectConfig resolved = config;
    resolved.resolve_rates();
    EscsGraph graph = synthesize_network(resolved.network);
    std::vector<CallEvent> events = generate_call_stream(graph, resolved.arrivals);
    SimulationResult result = run(graph, events, resolved.simulation);
    Summary summary = summarize(result);
    return {std::move(graph), std::move(events), std::move(result), summary};
}

std::vector<double> rate_ladder(double base, double increment, int steps) {
    if (!(base > 0.0)) throw Error("base rate must be > 0");
    if (!(increment > -1.0)) throw Error("increment must be > -1");
    if (steps < 0) throw Error("step count must be >= 0");
    std::vector<double> rates;
    for (int k = 0; k <= steps; ++k) rates.push_back(base * std::pow(1.0 + increment, k));
    return rates;
}

}  // namespace escs
