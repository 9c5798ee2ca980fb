/**
 * @file escs_sim.cpp
 * @brief Command-line front end: gen-graph, gen-calls, simulate, staffing,
 *        experiment and report.
 */
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "escs/config.hpp"
#include "escs/engine.hpp"
#include "escs/erlang.hpp"
#include "escs/error.hpp"
#include "escs/events_xml.hpp"
#include "escs/graphml.hpp"
#include "escs/metrics.hpp"
#include "escs/scenario.hpp"
#include "escs/synthesize.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "escs-sim 1.0.0";

struct Common {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Base seed for network, arrivals and simulation");
    cmd->add_option("--config", c.config, "Configuration XML")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory");
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw escs::Error(fmt::format("cannot read {}", path.string()));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw escs::Error(fmt::format("cannot write {}", path.string()));
}

escs::ProjectConfig load_config(const Common& c) {
    escs::ProjectConfig config = c.config.empty() ? escs::default_config() : escs::parse_config(slurp(c.config));
    if (c.seed) {
        config.network.seed = *c.seed;
        config.arrivals.seed = *c.seed;
        config.simulation.seed = *c.seed;
    }
    config.resolve_rates();
    return config;
}

std::string path_or_empty(const std::string& p) {
    return p.empty() ? std::string{} : fs::absolute(p).lexically_normal().string();
}

/// Records what is needed to rerun: inputs, the resolved configuration
/// (written next to the manifest) and the seed.
void write_manifest(const fs::path& dir, const std::string& command, const std::string& graph,
                    const std::string& events, const escs::ProjectConfig& config) {
    fs::create_directories(dir);
    spit(dir / "config.xml", escs::to_xml(config));
    nlohmann::ordered_json m;
    m["tool_version"] = kToolVersion;
    m["command"] = command;
    m["graph"] = path_or_empty(graph);
    m["events"] = path_or_empty(events);
    m["config"] = (fs::absolute(dir) / "config.xml").lexically_normal().string();
    m["output_directory"] = fs::absolute(dir).lexically_normal().string();
    m["seed"] = config.simulation.seed;
    m["network_seed"] = config.network.seed;
    m["arrivals_seed"] = config.arrivals.seed;
    if (config.calls_per_hour) m["calls_per_hour"] = *config.calls_per_hour;
    m["incidents_per_hour"] = config.arrivals.incidents_per_hour;
    spit(dir / "manifest.json", m.dump(2) + "\n");
}

int cmd_gen_graph(const Common& c) {
    const auto config = load_config(c);
    const auto graph = escs::synthesize_network(config.network);
    const fs::path out = fs::path(c.out) / "graph.graphml";
    spit(out, escs::to_graphml(graph));
    write_manifest(c.out, "gen-graph", out.string(), "", config);
    std::cout << fmt::format("wrote {} ({} vertices, {} edges)\n", out.string(), graph.size(),
                             graph.edges().size());
    return 0;
}

escs::EscsGraph read_graph(const std::string& path) {
    std::vector<std::string> warnings;
    auto graph = escs::parse_graphml(slurp(path), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return graph;
}

int cmd_gen_calls(const Common& c, const std::string& graph_path, std::optional<double> rate,
                  std::optional<double> duration) {
    auto config = load_config(c);
    if (rate) config = escs::at_rate(config, *rate);
    if (duration) config.arrivals.duration = *duration;
    const auto graph = read_graph(graph_path);
    const auto events = escs::generate_call_stream(graph, config.arrivals);
    const fs::path out = fs::path(c.out) / "events.xml";
    spit(out, escs::write_events(events));
    write_manifest(c.out, "gen-calls", graph_path, out.string(), config);
    std::cout << fmt::format("wrote {} ({} calls, {:.3f} incidents/hr)\n", out.string(), events.size(),
                             config.arrivals.incidents_per_hour);
    return 0;
}

int cmd_simulate(const Common& c, const std::string& graph_path, const std::string& events_path,
                 std::optional<std::int64_t> steps) {
    auto config = load_config(c);
    if (steps) config.simulation.duration_steps = *steps;
    const auto graph = read_graph(graph_path);
    const auto events = escs::read_events(slurp(events_path));
    const auto start = std::chrono::steady_clock::now();
    const auto result = escs::run(graph, events, config.simulation);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    escs::write_csv(result, c.out);
    write_manifest(c.out, "simulate", graph_path, events_path, config);
    std::cout << escs::format_summary(escs::summarize(result));
    std::cout << fmt::format("simulated {} steps in {:.1f} s; outputs in {}\n", result.steps, seconds, c.out);
    return 0;
}

struct StaffingArgs {
    double average_rate = escs::kDefaultCallsPerHour;
    double peak_rate = 137.0;
    double service = 204.0;
    double post_processing = 10.0;
    double sla_wait = 10.0;
    double sla_fraction = 0.9;
    double blocking = 0.01;
};

int cmd_staffing(const Common& c, const StaffingArgs& a) {
    std::string out;
    auto emit = [&out](const std::string& s) { out += s; };
    const double holding = a.service + a.post_processing;

    for (const auto& [label, rate] : {std::pair{"average", a.average_rate}, std::pair{"peak", a.peak_rate}}) {
        const double load = escs::offered_load(rate, a.service);
        emit(fmt::format("Call takers at the {} rate, {} calls/hr, service {} s (a = {:.3f} Erlangs)\n",
                         label, rate, a.service, load));
        emit(fmt::format("  {:>3}  {:>10}  {:>12}  {:>12}\n", "n", "P(wait>0)",
                         fmt::format("P(wait>{}s)", a.sla_wait), "E[wait] s"));
        const auto first = static_cast<std::int64_t>(std::floor(load)) + 1;
        for (std::int64_t n = first; n < first + 6; ++n) {
            const auto ec = escs::erlang_c(load, n, a.service);
            emit(fmt::format("  {:>3}  {:>10.4f}  {:>12.4f}  {:>12.2f}\n", n, ec.wait_probability,
                             escs::wait_exceeds(load, n, a.service, a.sla_wait), ec.expected_wait));
        }
        const double trunk_load = escs::offered_load(rate, holding);
        emit(fmt::format("Trunks at the {} rate, holding {} s (a = {:.3f} Erlangs)\n", label, holding,
                         trunk_load));
        emit(fmt::format("  {:>3}  {:>10}\n", "k", "blocking"));
        const auto k_first = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(trunk_load)));
        for (std::int64_t k = k_first; k < k_first + 12; ++k) {
            emit(fmt::format("  {:>3}  {:>10.5f}\n", k, escs::erlang_b(trunk_load, k)));
        }
        emit("\n");
    }

    struct Row {
        std::string agents_rule;
        std::string trunks_rule;
        std::int64_t agents;
        std::int64_t trunks;
    };
    std::vector<Row> rows;
    for (const auto& [alabel, arate] : {std::pair{"average", a.average_rate}, std::pair{"peak", a.peak_rate}}) {
        const auto mean_wait_n = escs::required_agents_mean_wait(arate, a.service, a.sla_wait);
        const auto sla_n = escs::required_agents(arate, a.service, a.sla_wait, a.sla_fraction);
        for (const auto& [tlabel, trate] : {std::pair{"average", a.average_rate}, std::pair{"peak", a.peak_rate}}) {
            const auto k = escs::required_trunks(trate, holding, a.blocking);
            rows.push_back({fmt::format("{} rate, mean wait <= {} s", alabel, a.sla_wait),
                            fmt::format("{} rate", tlabel), mean_wait_n, k});
            rows.push_back({fmt::format("{} rate, {:.0f}% within {} s", alabel, 100 * a.sla_fraction, a.sla_wait),
                            fmt::format("{} rate", tlabel), sla_n, k});
        }
    }
    emit(fmt::format("Staffing under each interpretation (trunks: blocking <= {}, holding {} s)\n",
                     a.blocking, holding));
    emit(fmt::format("  {:<38} {:<14} {:>6} {:>6}\n", "call takers sized by", "trunks sized by", "agents", "trunks"));
    const Row* match = nullptr;
    for (const Row& r : rows) {
        const bool hit = r.agents == 6 && r.trunks == 16;
        if (hit && !match) match = &r;
        emit(fmt::format("  {:<38} {:<14} {:>6} {:>6}{}\n", r.agents_rule, r.trunks_rule, r.agents,
                         r.trunks, hit ? "  <- (6, 16)" : ""));
    }
    if (match) {
        emit(fmt::format("(6, 16) is reproduced with call takers sized at the {} and trunks sized at the {}.\n",
                         match->agents_rule, match->trunks_rule));
    } else {
        emit("(6, 16) is not reproduced by any interpretation.\n");
    }
    std::cout << out;
    if (c.out != ".") {
        spit(fs::path(c.out) / "staffing.txt", out);
    }
    return 0;
}

std::string rate_dir(double rate) { return fmt::format("rate_{:.1f}", rate); }

int cmd_experiment(const Common& c, double base, double increment, int steps, std::vector<double> rates) {
    const auto config = load_config(c);
    if (rates.empty()) rates = escs::rate_ladder(base, increment, steps);
    const auto graph = escs::synthesize_network(config.network);
    fs::create_directories(c.out);
    spit(fs::path(c.out) / "graph.graphml", escs::to_graphml(graph));

    std::string sweep = "calls_per_hour,directory,mean_wait,abandonment_rate,time_above_80,calls,blocked\n";
    std::cout << fmt::format("{:>10} {:>10} {:>12} {:>14}\n", "calls/hr", "avg wait", "abandonment",
                             "time > 80%");
    for (double rate : rates) {
        const auto rc = escs::at_rate(config, rate);
        const auto events = escs::generate_call_stream(graph, rc.arrivals);
        const auto result = escs::run(graph, events, rc.simulation);
        const auto summary = escs::summarize(result);
        const fs::path dir = fs::path(c.out) / rate_dir(rate);
        spit(dir / "events.xml", escs::write_events(events));
        escs::write_csv(result, dir);
        write_manifest(dir, "experiment", (fs::path(c.out) / "graph.graphml").string(),
                       (dir / "events.xml").string(), rc);
        sweep += fmt::format("{},{},{},{},{},{},{}\n", rate, rate_dir(rate), summary.mean_wait,
                             summary.abandonment_rate, summary.time_above_80, summary.total_calls,
                             summary.blocked);
        std::cout << fmt::format("{:>10.1f} {:>9.2f}s {:>11.2f}% {:>13.2f}%\n", rate, summary.mean_wait,
                                 100 * summary.abandonment_rate, 100 * summary.time_above_80)
                  << std::flush;
    }
    spit(fs::path(c.out) / "sweep.csv", sweep);
    return 0;
}

/// Hands off to the analysis package when it is installed, otherwise lists
/// the CSV files a report would be built from.
int cmd_report(const std::string& experiment, const std::string& out) {
    if (!fs::is_directory(experiment)) {
        throw escs::Error(fmt::format("not a directory: {}", experiment));
    }
    if (std::system("python3 -c 'import escs_analysis' >/dev/null 2>&1") == 0) {
        const std::string cmd = fmt::format("python3 -m escs_analysis report '{}' --out '{}'", experiment, out);
        return std::system(cmd.c_str()) == 0 ? 0 : 1;
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(experiment)) {
        if (entry.is_directory() && fs::exists(entry.path() / "summary.csv")) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw escs::Error(fmt::format("no run directories with summary.csv in {}", experiment));
    std::string text = "analysis package not installed; report inputs:\n";
    if (fs::exists(fs::path(experiment) / "sweep.csv")) {
        text += fmt::format("sweep      {}\n", (fs::path(experiment) / "sweep.csv").string());
    }
    for (const auto& d : dirs) {
        for (const char* name : {"summary.csv", "utilization.csv", "calls.csv"}) {
            text += fmt::format("{:<10} {}\n", d.filename().string(), (d / name).string());
        }
    }
    std::cout << text;
    spit(fs::path(out) / "report_inputs.txt", text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Emergency services communication system simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common graph_c, calls_c, sim_c, staff_c, exp_c;

    auto* gen_graph = app.add_subcommand("gen-graph", "Synthesize the metropolitan network as GraphML");
    add_common(gen_graph, graph_c);

    auto* gen_calls = app.add_subcommand("gen-calls", "Generate a call event stream for a graph");
    add_common(gen_calls, calls_c);
    std::string calls_graph;
    std::optional<double> calls_rate, calls_duration;
    gen_calls->add_option("--graph", calls_graph, "GraphML network")->required()->check(CLI::ExistingFile);
    gen_calls->add_option("--calls-per-hour", calls_rate, "Target call rate")->check(CLI::PositiveNumber);
    gen_calls->add_option("--duration", calls_duration, "Horizon in seconds")->check(CLI::NonNegativeNumber);

    auto* simulate = app.add_subcommand("simulate", "Run the simulation and write CSV outputs");
    add_common(simulate, sim_c);
    std::string sim_graph, sim_events;
    std::optional<std::int64_t> sim_steps;
    simulate->add_option("--graph", sim_graph, "GraphML network")->required()->check(CLI::ExistingFile);
    simulate->add_option("--events", sim_events, "Events XML")->required()->check(CLI::ExistingFile);
    simulate->add_option("--steps", sim_steps, "Number of steps to run")->check(CLI::NonNegativeNumber);

    auto* staffing = app.add_subcommand("staffing", "Erlang B/C staffing table");
    add_common(staffing, staff_c);
    StaffingArgs sa;
    staffing->add_option("--average-rate", sa.average_rate, "Average calls per hour")->capture_default_str();
    staffing->add_option("--peak-rate", sa.peak_rate, "Peak calls per hour")->capture_default_str();
    staffing->add_option("--service", sa.service, "Mean service time, s")->capture_default_str();
    staffing->add_option("--post-processing", sa.post_processing, "Extra trunk holding time, s")->capture_default_str();
    staffing->add_option("--sla-wait", sa.sla_wait, "Waiting tolerance, s")->capture_default_str();
    staffing->add_option("--sla-fraction", sa.sla_fraction, "Fraction answered within the tolerance")->capture_default_str();
    staffing->add_option("--blocking", sa.blocking, "Trunk blocking target")->capture_default_str();

    auto* experiment = app.add_subcommand("experiment", "Sweep arrival rates, one output directory per rate");
    add_common(experiment, exp_c);
    double base = 45.6, increment = 0.1;
    int ladder_steps = 6;
    std::vector<double> rates;
    experiment->add_option("--base", base, "Lowest rate, calls per hour")->capture_default_str();
    experiment->add_option("--increment", increment, "Multiplicative step")->capture_default_str();
    experiment->add_option("--steps", ladder_steps, "Number of increments")->capture_default_str();
    experiment->add_option("--rates", rates, "Explicit rates (replaces the ladder)")->delimiter(',');

    auto* report = app.add_subcommand("report", "Figures and tables for an experiment directory");
    std::string report_dir, report_out = ".";
    report->add_option("experiment", report_dir, "Experiment directory")->required();
    report->add_option("--out", report_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_graph) return cmd_gen_graph(graph_c);
        if (*gen_calls) return cmd_gen_calls(calls_c, calls_graph, calls_rate, calls_duration);
        if (*simulate) return cmd_simulate(sim_c, sim_graph, sim_events, sim_steps);
        if (*staffing) return cmd_staffing(staff_c, sa);
        if (*experiment) return cmd_experiment(exp_c, base, increment, ladder_steps, rates);
        if (*report) return cmd_report(report_dir, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
