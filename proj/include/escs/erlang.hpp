/**
 * @file erlang.hpp
 * @brief Erlang B and C calculators and staffing searches.
 *
 * Loads are in Erlangs (arrival rate times mean holding time). Rates passed to
 * the staffing helpers are per hour and durations are in seconds.
 */
#pragma once

#include <cstdint>

namespace escs {

/// Blocking probability of an M/M/k/k system offered `a` Erlangs.
/// Throws escs::Error for a < 0 or k < 0.
double erlang_b(double a, std::int64_t k);

struct ErlangC {
    double wait_probability = 0.0;  ///< P(W > 0)
    double expected_wait = 0.0;     ///< in units of the mean service time unless scaled
    bool saturated = false;         ///< a >= n: queue grows without bound
};

/// M/M/n delay probability; `mean_service` scales expected_wait.
ErlangC erlang_c(double a, std::int64_t n, double mean_service = 1.0);

/// P(W > t) for M/M/n with offered load `a` and the given mean service time.
double wait_exceeds(double a, std::int64_t n, double mean_service, double t);

/// Offered load in Erlangs for a rate per hour and a holding time in seconds.
inline double offered_load(double calls_per_hour, double holding_seconds) {
    return calls_per_hour * holding_seconds / 3600.0;
}

inline constexpr std::int64_t kStaffingSearchBound = 10'000;

/// Smallest n with P(W <= sla_wait) >= sla_fraction.
std::int64_t required_agents(double calls_per_hour, double mean_service, double sla_wait,
                             double sla_fraction);

/// Smallest n whose Erlang-C mean wait is at most `max_mean_wait` seconds.
std::int64_t required_agents_mean_wait(double calls_per_hour, double mean_service,
                                       double max_mean_wait);

/// Smallest k >= 1 with erlang_b <= blocking_target.
std::int64_t required_trunks(double calls_per_hour, double mean_holding, double blocking_target);

}  // namespace escs
