/**
 * @file synthesize.hpp
 * @brief Seeded construction of a synthetic single-jurisdiction network.
 *
 * Caller regions tile the bounding box as a grid; PSAPs and responders are
 * placed uniformly at random inside it. Each region calls its nearest PSAP,
 * each PSAP can dispatch to every responder, and each responder reports
 * status back to every PSAP.
 */
#pragma once

#include <cstdint>

#include "escs/geometry.hpp"
#include "escs/graph.hpp"

namespace escs {

struct NetworkSpec {
    int psaps = 1;
    int fire_ems_stations = 34;
    int law_stations = 5;
    int grid_rows = 4;
    int grid_cols = 4;
    int servers = 6;
    int trunks = 16;
    int fire_ems_units = 2;
    int law_units = 8;
    Rect bounds{0.0, 0.0, 12'000.0, 24'000.0};
    std::uint64_t seed = 1;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Vertex ids: PSAPs first, then FIRE+EMS stations, then LAW stations, then
/// caller regions row-major from the south-west corner.
EscsGraph synthesize_network(const NetworkSpec& spec);

}  // namespace escs
