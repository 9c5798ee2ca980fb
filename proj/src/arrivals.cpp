#include "escs/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/random/discrete_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"
#include "escs/models.hpp"

namespace escs {
namespace {

constexpr int kMaxPositiveDraws = 1000;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double positive_normal(double mean, double sigma, Rng& rng, std::string_view what) {
    if (sigma == 0.0) return mean;
    boost::random::normal_distribution<double> normal(mean, sigma);
    for (int i = 0; i < kMaxPositiveDraws; ++i) {
        const double value = normal(rng);
        if (value > 0.0) return value;
    }
    throw Error(fmt::format("{}: no positive draw in {} attempts (mean {}, sd {})", what,
                            kMaxPositiveDraws, mean, sigma));
}

double uniform01(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

}  // namespace

void IncidentPrototype::validate() const {
    const auto fail = [&](std::string_view what) {
        throw Error(fmt::format("prototype '{}': {}", name, what));
    };
    if (!(mu_r > 0.0) || !std::isfinite(mu_r)) fail("mu_r must be > 0");
    if (!(mu_i > 0.0) || !std::isfinite(mu_i)) fail("mu_i must be > 0");
    if (!(interarrival_rate > 0.0) || !std::isfinite(interarrival_rate)) {
        fail("interarrival_rate must be > 0");
    }
    if (!finite_nonneg(sigma_r)) fail("sigma_r must be >= 0");
    if (!finite_nonneg(sigma_i)) fail("sigma_i must be >= 0");
    if (!(weight > 0.0) || !std::isfinite(weight)) fail("weight must be > 0");
}

void CallSampling::validate() const {
    if (!(service_min >= 0.0) || !(service_mean > service_min)) {
        throw Error("service model needs mean > min >= 0");
    }
    if (!(patience_mean > 0.0)) throw Error("patience mean must be > 0");
    if (!(on_scene_mean > 0.0)) throw Error("on-scene mean must be > 0");
}

void ArrivalConfig::validate() const {
    if (!(incidents_per_hour > 0.0) || !std::isfinite(incidents_per_hour)) {
        throw Error("incident rate must be > 0");
    }
    if (!finite_nonneg(duration)) throw Error("arrival duration must be >= 0");
    if (!bounds.valid()) throw Error("arrival bounding box has zero area");
    if (prototypes.empty()) throw Error("at least one incident prototype is required");
    for (const auto& p : prototypes) p.validate();
    if (!finite_nonneg(mix.law) || !finite_nonneg(mix.fire) || !finite_nonneg(mix.ems) ||
        std::abs(mix.law + mix.fire + mix.ems - 1.0) > 1e-9) {
        throw Error("call type mix must be non-negative and sum to 1");
    }
    sampling.validate();
}

GeoPoint PolarOffset::apply(GeoPoint centre) const {
    return {centre.x + rho * std::cos(theta), centre.y + rho * std::sin(theta)};
}

std::vector<Incident> sample_incidents(const ArrivalConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<double> weights;
    for (const auto& p : cfg.prototypes) weights.push_back(p.weight);
    boost::random::discrete_distribution<std::size_t, double> pick_proto(weights);
    boost::random::discrete_distribution<int, double> pick_type{cfg.mix.law, cfg.mix.fire,
                                                                cfg.mix.ems};
    boost::random::exponential_distribution<double> gap(cfg.incidents_per_hour / 3600.0);
    boost::random::uniform_real_distribution<double> ux(cfg.bounds.xmin, cfg.bounds.xmax);
    boost::random::uniform_real_distribution<double> uy(cfg.bounds.ymin, cfg.bounds.ymax);

    std::vector<Incident> incidents;
    double t = 0.0;
    while (true) {
        t += gap(rng);
        if (t >= cfg.duration) break;
        Incident incident;
        incident.time = t;
        incident.location.x = ux(rng);
        incident.location.y = uy(rng);
        incident.prototype = pick_proto(rng);
        incident.call_type = kAllCallTypes[pick_type(rng)];
        incidents.push_back(incident);
    }
    return incidents;
}

ClusterParams sample_cluster_params(const IncidentPrototype& proto, Rng& rng) {
    proto.validate();
    ClusterParams params;
    params.radius = positive_normal(proto.mu_r, proto.sigma_r, rng, "cluster radius");
    params.intensity = positive_normal(proto.mu_i, proto.sigma_i, rng, "cluster intensity");
    return params;
}

std::int64_t cluster_size(double radius, double intensity) {
    const double n = std::numbers::pi * radius * radius * intensity;
    return std::max<std::int64_t>(1, std::llround(n));
}

PolarOffset scatter_point(double radius, double u, double v) {
    return {radius * std::sqrt(u), 2.0 * std::numbers::pi * v};
}

std::vector<CallEvent> generate_cluster_calls(const Incident& incident,
                                              const IncidentPrototype& proto,
                                              const CallSampling& sampling, Rng& rng,
                                              CallId first_id) {
    sampling.validate();
    const ClusterParams params = sample_cluster_params(proto, rng);
    const std::int64_t n = cluster_size(params.radius, params.intensity);
    boost::random::exponential_distribution<double> gap(proto.interarrival_rate);

    std::vector<CallEvent> calls;
    calls.reserve(static_cast<std::size_t>(n));
    double t = incident.time;
    for (std::int64_t k = 0; k < n; ++k) {
        t += gap(rng);
        CallEvent call;
        call.id = first_id + static_cast<CallId>(k);
        call.original_id = call.id;
        call.time = static_cast<std::int64_t>(std::ceil(t));
        const double u = uniform01(rng);
        const double v = uniform01(rng);
        call.location = scatter_point(params.radius, u, v).apply(incident.location);
        call.type = incident.call_type;
        call.service_duration = sample_service(sampling.service_min, sampling.service_mean, rng);
        call.patience = sample_patience(sampling.patience_mean, rng);
        call.on_scene_duration = sample_on_scene(sampling.on_scene_mean, rng);
        calls.push_back(call);
    }
    return calls;
}

std::vector<CallEvent> generate_call_stream(const EscsGraph& graph, const ArrivalConfig& cfg) {
    if (!graph.coverage().valid()) throw Error("graph has no caller regions");
    cfg.validate();

    Rng primary = make_stream(cfg.seed, kPrimaryStream);
    const std::vector<Incident> incidents = sample_incidents(cfg, primary);

    std::vector<CallEvent> stream;
    for (std::size_t i = 0; i < incidents.size(); ++i) {
        Rng rng = make_stream(cfg.seed, kIncidentStreamBase + i);
        const Incident& incident = incidents[i];
        for (CallEvent& call : generate_cluster_calls(incident, cfg.prototypes[incident.prototype],
                                                      cfg.sampling, rng)) {
            if (static_cast<double>(call.time) >= cfg.duration) continue;
            call.location = cfg.bounds.clamp(call.location);
            call.region = locate_region(graph, call.location);
            stream.push_back(call);
        }
    }
    std::stable_sort(stream.begin(), stream.end(),
                     [](const CallEvent& a, const CallEvent& b) { return a.time < b.time; });
    for (std::size_t i = 0; i < stream.size(); ++i) {
        stream[i].id = i;
        stream[i].original_id = i;
    }
    return stream;
}

double expected_calls_per_incident(std::span<const IncidentPrototype> prototypes,
                                   std::size_t draws, std::uint64_t seed) {
    if (prototypes.empty()) throw Error("at least one incident prototype is required");
    if (draws == 0) throw Error("expected_calls_per_incident: draws must be > 0");
    double total_weight = 0.0;
    double weighted = 0.0;
    for (std::size_t p = 0; p < prototypes.size(); ++p) {
        Rng rng = make_stream(seed, p);
        double sum = 0.0;
        for (std::size_t k = 0; k < draws; ++k) {
            const ClusterParams c = sample_cluster_params(prototypes[p], rng);
            sum += static_cast<double>(cluster_size(c.radius, c.intensity));
        }
        weighted += prototypes[p].weight * sum / static_cast<double>(draws);
        total_weight += prototypes[p].weight;
    }
    return weighted / total_weight;
}

std::vector<IncidentPrototype> default_prototypes() {
    return {
        {"isolated", 1.0, 0.0, 1.0e-9, 0.0, 1.0, 1.0},
        {"burst", 1000.0, 0.0, 3.4237e-6, 0.0, 0.39324, 0.061741},
        {"surge", 1000.0, 0.0, 1.07635e-4, 0.0, 0.0065453, 0.0027204},
    };
}

}  // namespace escs
