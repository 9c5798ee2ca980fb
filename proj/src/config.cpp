#include "escs/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {
namespace {

namespace pt = boost::property_tree;

class Attrs {
public:
    Attrs(const pt::ptree& element, std::string where) : where_(std::move(where)) {
        if (const auto a = element.get_child_optional("<xmlattr>")) attrs_ = &*a;
    }

    template <class T>
    void read(const char* name, T& out) const {
        if (!attrs_) return;
        const auto text = attrs_->get_optional<std::string>(name);
        if (!text) return;
        if constexpr (std::is_same_v<T, bool>) {
            if (*text == "true" || *text == "1") {
                out = true;
            } else if (*text == "false" || *text == "0") {
                out = false;
            } else {
                fail(name, *text);
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            out = *text;
        } else {
            T value{};
            const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
            if (ec != std::errc{} || ptr != text->data() + text->size()) fail(name, *text);
            out = value;
        }
    }

    [[nodiscard]] bool has(const char* name) const {
        return attrs_ && attrs_->get_optional<std::string>(name).has_value();
    }

private:
    [[noreturn]] void fail(const char* name, const std::string& text) const {
        throw Error(fmt::format("{}: invalid value '{}' for '{}'", where_, text, name));
    }
    const pt::ptree* attrs_ = nullptr;
    std::string where_;
};

}  // namespace

void SimulationConfig::validate() const {
    if (!(step_duration > 0.0) || !std::isfinite(step_duration)) {
        throw Error("step_duration must be > 0");
    }
    if (epoch_length < 1) throw Error("epoch_length must be >= 1");
    if (duration_steps < 0) throw Error("duration_steps must be >= 0");
    if (!(responder_speed > 0.0)) throw Error("responder_speed must be > 0");
    if (!(redial_probability >= 0.0 && redial_probability <= 1.0)) {
        throw Error("redial_probability must lie in [0, 1]");
    }
    sampling().validate();
}

double ProjectConfig::incident_rate_for(double calls) const {
    if (!(calls > 0.0)) throw Error("call rate must be > 0");
    return calls / expected_calls_per_incident(arrivals.prototypes);
}

void ProjectConfig::resolve_rates() {
    arrivals.sampling = simulation.sampling();
    if (calls_per_hour) arrivals.incidents_per_hour = incident_rate_for(*calls_per_hour);
}

ProjectConfig default_config() {
    ProjectConfig config;
    config.simulation.duration_steps = static_cast<std::int64_t>(kOneMonth);
    config.arrivals.duration = kOneMonth;
    config.arrivals.bounds = config.network.bounds;
    config.arrivals.prototypes = default_prototypes();
    config.calls_per_hour = kDefaultCallsPerHour;
    config.resolve_rates();
    return config;
}

ProjectConfig parse_config(std::string_view xml) {
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw Error(fmt::format("malformed configuration XML: {}", e.message()));
    }
    const auto root = doc.get_child_optional("escs_config");
    if (!root) throw Error("malformed configuration XML: missing <escs_config> root");

    ProjectConfig config = default_config();
    bool arrival_bounds_given = false;
    bool arrival_seed_given = false;

    if (const auto net = root->get_child_optional("network")) {
        const Attrs a(*net, "<network>");
        NetworkSpec& n = config.network;
        a.read("psaps", n.psaps);
        a.read("fire_ems_stations", n.fire_ems_stations);
        a.read("law_stations", n.law_stations);
        a.read("grid_rows", n.grid_rows);
        a.read("grid_cols", n.grid_cols);
        a.read("servers", n.servers);
        a.read("trunks", n.trunks);
        a.read("fire_ems_units", n.fire_ems_units);
        a.read("law_units", n.law_units);
        a.read("xmin", n.bounds.xmin);
        a.read("ymin", n.bounds.ymin);
        a.read("xmax", n.bounds.xmax);
        a.read("ymax", n.bounds.ymax);
        a.read("seed", n.seed);
    }
    if (const auto sim = root->get_child_optional("simulation")) {
        const Attrs a(*sim, "<simulation>");
        SimulationConfig& s = config.simulation;
        a.read("seed", s.seed);
        a.read("step_duration", s.step_duration);
        a.read("epoch_length", s.epoch_length);
        a.read("duration_steps", s.duration_steps);
        a.read("responder_speed", s.responder_speed);
        a.read("on_scene_mean", s.on_scene_mean);
        a.read("patience_mean", s.patience_mean);
        a.read("redial_probability", s.redial_probability);
        a.read("service_min", s.service_min);
        a.read("service_mean", s.service_mean);
        a.read("abandonment", s.abandonment);
        a.read("redial_after_abandon", s.redial_after_abandon);
    }
    if (const auto arr = root->get_child_optional("arrivals")) {
        const Attrs a(*arr, "<arrivals>");
        ArrivalConfig& c = config.arrivals;
        if (a.has("incidents_per_hour")) {
            a.read("incidents_per_hour", c.incidents_per_hour);
            config.calls_per_hour.reset();
        }
        if (a.has("calls_per_hour")) {
            double calls = 0.0;
            a.read("calls_per_hour", calls);
            config.calls_per_hour = calls;
        }
        a.read("duration", c.duration);
        a.read("law", c.mix.law);
        a.read("fire", c.mix.fire);
        a.read("ems", c.mix.ems);
        arrival_seed_given = a.has("seed");
        a.read("seed", c.seed);
        arrival_bounds_given = a.has("xmin") || a.has("ymin") || a.has("xmax") || a.has("ymax");
        a.read("xmin", c.bounds.xmin);
        a.read("ymin", c.bounds.ymin);
        a.read("xmax", c.bounds.xmax);
        a.read("ymax", c.bounds.ymax);

        std::vector<IncidentPrototype> protos;
        std::size_t index = 0;
        for (const auto& [tag, child] : *arr) {
            if (tag != "prototype") continue;
            const Attrs p(child, fmt::format("<prototype> #{}", index++));
            IncidentPrototype proto;
            p.read("name", proto.name);
            p.read("mu_r", proto.mu_r);
            p.read("sigma_r", proto.sigma_r);
            p.read("mu_i", proto.mu_i);
            p.read("sigma_i", proto.sigma_i);
            p.read("interarrival_rate", proto.interarrival_rate);
            p.read("weight", proto.weight);
            proto.validate();
            protos.push_back(proto);
        }
        if (!protos.empty()) c.prototypes = std::move(protos);
    }
    if (!arrival_bounds_given) config.arrivals.bounds = config.network.bounds;
    if (!arrival_seed_given) config.arrivals.seed = config.simulation.seed;

    config.simulation.validate();
    config.resolve_rates();
    config.arrivals.validate();
    return config;
}

std::string to_xml(const ProjectConfig& config) {
    const NetworkSpec& n = config.network;
    const ArrivalConfig& a = config.arrivals;
    const SimulationConfig& s = config.simulation;
    std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<escs_config>\n";
    fmt::format_to(std::back_inserter(out),
                   "  <network psaps=\"{}\" fire_ems_stations=\"{}\" law_stations=\"{}\" "
                   "grid_rows=\"{}\" grid_cols=\"{}\" servers=\"{}\" trunks=\"{}\" "
                   "fire_ems_units=\"{}\" law_units=\"{}\" xmin=\"{}\" ymin=\"{}\" xmax=\"{}\" "
                   "ymax=\"{}\" seed=\"{}\"/>\n",
                   n.psaps, n.fire_ems_stations, n.law_stations, n.grid_rows, n.grid_cols,
                   n.servers, n.trunks, n.fire_ems_units, n.law_units, n.bounds.xmin,
                   n.bounds.ymin, n.bounds.xmax, n.bounds.ymax, n.seed);
    const std::string rate = config.calls_per_hour
                                 ? fmt::format("calls_per_hour=\"{}\"", *config.calls_per_hour)
                                 : fmt::format("incidents_per_hour=\"{}\"", a.incidents_per_hour);
    fmt::format_to(std::back_inserter(out),
                   "  <arrivals {} duration=\"{}\" law=\"{}\" fire=\"{}\" ems=\"{}\" seed=\"{}\" "
                   "xmin=\"{}\" ymin=\"{}\" xmax=\"{}\" ymax=\"{}\">\n",
                   rate, a.duration, a.mix.law, a.mix.fire, a.mix.ems, a.seed, a.bounds.xmin,
                   a.bounds.ymin, a.bounds.xmax, a.bounds.ymax);
    for (const IncidentPrototype& p : a.prototypes) {
        fmt::format_to(std::back_inserter(out),
                       "    <prototype name=\"{}\" mu_r=\"{}\" sigma_r=\"{}\" mu_i=\"{}\" "
                       "sigma_i=\"{}\" interarrival_rate=\"{}\" weight=\"{}\"/>\n",
                       p.name, p.mu_r, p.sigma_r, p.mu_i, p.sigma_i, p.interarrival_rate, p.weight);
    }
    out += "  </arrivals>\n";
    fmt::format_to(std::back_inserter(out),
                   "  <simulation seed=\"{}\" step_duration=\"{}\" epoch_length=\"{}\" "
                   "duration_steps=\"{}\" responder_speed=\"{}\" on_scene_mean=\"{}\" "
                   "patience_mean=\"{}\" redial_probability=\"{}\" service_min=\"{}\" "
                   "service_mean=\"{}\" abandonment=\"{}\" redial_after_abandon=\"{}\"/>\n",
                   s.seed, s.step_duration, s.epoch_length, s.duration_steps, s.responder_speed,
                   s.on_scene_mean, s.patience_mean, s.redial_probability, s.service_min,
                   s.service_mean, s.abandonment, s.redial_after_abandon);
    out += "</escs_config>\n";
    return out;
}

}  // namespace escs
