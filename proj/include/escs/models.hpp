/**
 * @file models.hpp
 * @brief Stochastic and kinematic sub-models consumed by the vertex handlers:
 *        patience, service, on-scene time, redial, travel.
 */
#pragma once

#include "escs/geometry.hpp"
#include "escs/rng.hpp"

namespace escs {

/// Exponential patience with the given mean (s).
double sample_patience(double mean, Rng& rng);

/// `min` + Exponential(mean - min). Throws escs::Error unless mean > min >= 0.
double sample_service(double min, double mean, Rng& rng);

/// Exponential on-scene time with the given mean (s).
double sample_on_scene(double mean, Rng& rng);

/// Bernoulli redial decision.
bool sample_redial(double probability, Rng& rng);

/// Seconds to cover the straight-line distance at `speed` m/s.
double driving_time(GeoPoint from, GeoPoint to, double speed);

/// Abandonment rate from the observed abandonment fraction and mean queue wait:
/// theta = P{Ab} / E[W].
double estimate_theta(double abandon_fraction, double avg_wait);

}  // namespace escs
