#include "escs/erlang.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {

double erlang_b(double a, std::int64_t k) {
    if (!(a >= 0.0)) throw Error(fmt::format("offered load must be >= 0, got {}", a));
    if (k < 0) throw Error(fmt::format("trunk count must be >= 0, got {}", k));
    double b = 1.0;
    for (std::int64_t j = 1; j <= k; ++j) b = a * b / (static_cast<double>(j) + a * b);
    return b;
}

ErlangC erlang_c(double a, std::int64_t n, double mean_service) {
    if (n < 1) throw Error(fmt::format("agent count must be >= 1, got {}", n));
    ErlangC out;
    if (a >= static_cast<double>(n)) {
        out.wait_probability = 1.0;
        out.expected_wait = std::numeric_limits<double>::infinity();
        out.saturated = true;
        return out;
    }
    const double b = erlang_b(a, n);
    const double rho = a / static_cast<double>(n);
    out.wait_probability = b / (1.0 - rho * (1.0 - b));
    out.expected_wait = out.wait_probability * mean_service / (static_cast<double>(n) - a);
    return out;
}

double wait_exceeds(double a, std::int64_t n, double mean_service, double t) {
    const ErlangC c = erlang_c(a, n, mean_service);
    if (c.saturated) return 1.0;
    return c.wait_probability * std::exp(-(static_cast<double>(n) - a) * t / mean_service);
}

std::int64_t required_agents(double calls_per_hour, double mean_service, double sla_wait,
                             double sla_fraction) {
    const double a = offered_load(calls_per_hour, mean_service);
    for (std::int64_t n = 1; n <= kStaffingSearchBound; ++n) {
        if (1.0 - wait_exceeds(a, n, mean_service, sla_wait) >= sla_fraction) return n;
    }
    throw Error("no agent count within the search bound meets the service level");
}

std::int64_t required_agents_mean_wait(double calls_per_hour, double mean_service,
                                       double max_mean_wait) {
    const double a = offered_load(calls_per_hour, mean_service);
    for (std::int64_t n = 1; n <= kStaffingSearchBound; ++n) {
        if (erlang_c(a, n, mean_service).expected_wait <= max_mean_wait) return n;
    }
    throw Error("no agent count within the search bound meets the mean wait target");
}

std::int64_t required_trunks(double calls_per_hour, double mean_holding, double blocking_target) {
    const double a = offered_load(calls_per_hour, mean_holding);
    for (std::int64_t k = 1; k <= kStaffingSearchBound; ++k) {
        if (erlang_b(a, k) <= blocking_target) return k;
    }
    throw Error("no trunk count within the search bound meets the blocking target");
}

}  // namespace escs
