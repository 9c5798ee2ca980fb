#include "escs/models.hpp"

#include <cmath>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {

namespace {
double exponential(double mean, Rng& rng) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw Error(fmt::format("exponential mean must be positive, got {}", mean));
    }
    return boost::random::exponential_distribution<double>(1.0 / mean)(rng);
}
}  // namespace

double sample_patience(double mean, Rng& rng) { return exponential(mean, rng); }

double sample_service(double min, double mean, Rng& rng) {
    if (!(min >= 0.0) || !(mean > min)) {
        throw Error(fmt::format("service model needs mean > min >= 0 (min {}, mean {})", min, mean));
    }
    return min + exponential(mean - min, rng);
}

double sample_on_scene(double mean, Rng& rng) { return exponential(mean, rng); }

bool sample_redial(double probability, Rng& rng) {
    if (probability <= 0.0) return false;
    if (probability >= 1.0) return true;
    return boost::random::bernoulli_distribution<double>(probability)(rng);
}

double driving_time(GeoPoint from, GeoPoint to, double speed) {
    if (!(speed > 0.0)) throw Error(fmt::format("responder speed must be positive, got {}", speed));
    return distance(from, to) / speed;
}

double estimate_theta(double abandon_fraction, double avg_wait) {
    if (!(avg_wait > 0.0)) throw Error("estimate_theta: average wait must be positive");
    if (abandon_fraction < 0.0 || abandon_fraction > 1.0) {
        throw Error("estimate_theta: abandonment fraction must lie in [0, 1]");
    }
    return abandon_fraction / avg_wait;
}

}  // namespace escs
