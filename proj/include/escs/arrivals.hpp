/**
 * @file arrivals.hpp
 * @brief Synthetic emergency-call streams from a spatiotemporal cluster point process.
 *
 * Incidents (the parent process) arrive as a homogeneous Poisson process and
 * are placed uniformly in the bounding box. Each incident draws a cluster
 * radius and intensity from its prototype, which fix the number of calls it
 * produces; those calls follow the incident at exponential inter-arrival
 * gaps and are scattered uniformly over the cluster disc.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "escs/geometry.hpp"
#include "escs/graph.hpp"
#include "escs/rng.hpp"

namespace escs {

using CallId = std::uint64_t;

/// Redial attempts of a call get id `previous + kRedialIdStride`; input ids stay below it.
inline constexpr CallId kRedialIdStride = CallId{1} << 40;

/// Parameters of one incident magnitude class.
struct IncidentPrototype {
    std::string name;
    double mu_r = 0.0;               ///< mean cluster radius, m
    double sigma_r = 0.0;            ///< radius standard deviation, m
    double mu_i = 0.0;               ///< mean intensity, calls per m^2
    double sigma_i = 0.0;            ///< intensity standard deviation, calls per m^2
    double interarrival_rate = 0.0;  ///< rate of the exponential gap between calls, 1/s
    double weight = 1.0;             ///< relative selection probability

    void validate() const;
    friend bool operator==(const IncidentPrototype&, const IncidentPrototype&) = default;
};

struct Incident {
    double time = 0.0;  ///< seconds since simulation start
    GeoPoint location;
    std::size_t prototype = 0;  ///< index into ArrivalConfig::prototypes
    CallType call_type = CallType::Law;
};

/// One call attempt. Durations are drawn up front so a run is a pure
/// function of its event file.
struct CallEvent {
    CallId id = 0;
    CallId original_id = 0;
    VertexId region = 0;
    std::int64_t time = 0;  ///< whole seconds
    GeoPoint location;
    CallType type = CallType::Law;
    double service_duration = 0.0;
    double patience = 0.0;
    double on_scene_duration = 0.0;

    friend bool operator==(const CallEvent&, const CallEvent&) = default;
};

/// Per-call duration models.
struct CallSampling {
    double service_min = 4.0;
    double service_mean = 204.0;
    double patience_mean = 49.36;
    double on_scene_mean = 1200.0;

    void validate() const;
    friend bool operator==(const CallSampling&, const CallSampling&) = default;
};

/// Probabilities of LAW, FIRE and EMS incidents.
struct TypeMix {
    double law = 0.5;
    double fire = 0.15;
    double ems = 0.35;

    friend bool operator==(const TypeMix&, const TypeMix&) = default;
};

struct ArrivalConfig {
    double incidents_per_hour = 30.0;
    double duration = 86'400.0;  ///< seconds
    Rect bounds{0.0, 0.0, 12'000.0, 24'000.0};
    std::vector<IncidentPrototype> prototypes;
    TypeMix mix;
    CallSampling sampling;
    std::uint64_t seed = 1;

    void validate() const;
    friend bool operator==(const ArrivalConfig&, const ArrivalConfig&) = default;
};

struct ClusterParams {
    double radius = 0.0;
    double intensity = 0.0;
};

/// Polar offset from a cluster centre.
struct PolarOffset {
    double rho = 0.0;
    double theta = 0.0;

    [[nodiscard]] GeoPoint apply(GeoPoint centre) const;
};

std::vector<Incident> sample_incidents(const ArrivalConfig& cfg, Rng& rng);

/// Radius and intensity drawn from the prototype's normals, each redrawn
/// until strictly positive. Throws escs::Error after 1000 draws.
ClusterParams sample_cluster_params(const IncidentPrototype& proto, Rng& rng);

/// max(1, round(pi * r^2 * i)).
std::int64_t cluster_size(double radius, double intensity);

/// (radius * sqrt(u), 2 * pi * v): uniform over the disc for uniform u, v.
PolarOffset scatter_point(double radius, double u, double v);

/// Calls of one incident. `first_id` numbers them consecutively; the region
/// field is left for the caller to resolve.
std::vector<CallEvent> generate_cluster_calls(const Incident& incident,
                                              const IncidentPrototype& proto,
                                              const CallSampling& sampling, Rng& rng,
                                              CallId first_id = 0);

/// Whole time-sorted stream for `graph`: incidents from the config seed,
/// one derived substream per incident, locations clipped to the box and
/// resolved to caller regions, calls past the horizon dropped, ids
/// renumbered 0..n-1 in time order.
std::vector<CallEvent> generate_call_stream(const EscsGraph& graph, const ArrivalConfig& cfg);

/// Monte-Carlo estimate of the mean number of calls per incident under the
/// prototype weights (deterministic for a given seed).
double expected_calls_per_incident(std::span<const IncidentPrototype> prototypes,
                                   std::size_t draws = 200'000, std::uint64_t seed = 7);

/// Prototype set calibrated for the single-PSAP metropolitan scenario: isolated
/// single calls, 11-call bursts about 2.5 s apart, and 338-call surges spread
/// over roughly 14 hours.
std::vector<IncidentPrototype> default_prototypes();

}  // namespace escs
