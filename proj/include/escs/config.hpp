/**
 * @file config.hpp
 * @brief Run configuration and its XML form.
 *
 * A configuration file may carry any of three sections; missing sections and
 * missing fields keep their defaults:
 *
 *     <escs_config>
 *       <network psaps="1" fire_ems_stations="34" law_stations="5" grid_rows="4" grid_cols="4"
 *                servers="6" trunks="16" fire_ems_units="2" law_units="8"
 *                xmin="0" ymin="0" xmax="12000" ymax="24000"/>
 *       <arrivals calls_per_hour="57.25" duration="2592000" law="0.5" fire="0.15" ems="0.35">
 *         <prototype name="" mu_r="" sigma_r="" mu_i="" sigma_i="" interarrival_rate="" weight=""/>
 *       </arrivals>
 *       <simulation seed="1" step_duration="1" epoch_length="86400" duration_steps="..."
 *                   responder_speed="11.11" on_scene_mean="1200" patience_mean="49.36"
 *                   redial_probability="0.85" service_min="4" service_mean="204"
 *                   abandonment="true" redial_after_abandon="false"/>
 *     </escs_config>
 *
 * `calls_per_hour` is converted to an incident rate through the prototypes'
 * expected cluster size; `incidents_per_hour` may be given instead.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "escs/arrivals.hpp"
#include "escs/synthesize.hpp"

namespace escs {

struct SimulationConfig {
    std::uint64_t seed = 1;
    double step_duration = 1.0;      ///< seconds per step
    std::int64_t epoch_length = 86'400;  ///< steps
    std::int64_t duration_steps = 86'400;
    double responder_speed = 11.11;  ///< m/s
    double on_scene_mean = 1200.0;
    double patience_mean = 49.36;
    double redial_probability = 0.85;
    double service_min = 4.0;
    double service_mean = 204.0;
    bool abandonment = true;
    bool redial_after_abandon = false;

    void validate() const;
    [[nodiscard]] CallSampling sampling() const {
        return {service_min, service_mean, patience_mean, on_scene_mean};
    }
    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Default arrival rate target of the metropolitan scenario, calls per hour.
inline constexpr double kDefaultCallsPerHour = 57.25;
/// One 30-day month, seconds.
inline constexpr double kOneMonth = 30.0 * 86'400.0;

struct ProjectConfig {
    NetworkSpec network;
    ArrivalConfig arrivals;
    SimulationConfig simulation;
    /// When set, arrivals.incidents_per_hour is derived from it.
    std::optional<double> calls_per_hour;

    /// Incident rate giving `calls_per_hour` under the configured prototypes.
    [[nodiscard]] double incident_rate_for(double calls_per_hour) const;
    /// Re-derives arrivals.incidents_per_hour from calls_per_hour, if set.
    void resolve_rates();
    friend bool operator==(const ProjectConfig&, const ProjectConfig&) = default;
};

/// Built-in defaults: the synthetic metropolitan network, calibrated
/// prototypes, one month at 57.25 calls/hr.
ProjectConfig default_config();

/// Parses a configuration document on top of default_config().
ProjectConfig parse_config(std::string_view xml);

std::string to_xml(const ProjectConfig& config);

}  // namespace escs
