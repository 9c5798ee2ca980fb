/**
 * @file graphml.hpp
 * @brief GraphML reader/writer for ESCS networks.
 *
 * Node data keys: `type` (CALR | PSAP | RESP), `x`, `y`, `servers`, `trunks`,
 * `units`, `capability` (e.g. "FIRE,EMS"), `xmin`, `ymin`, `xmax`, `ymax`.
 * Edge data key: `semantic` (CALL | DISPATCH | STATUS). Unknown keys are
 * ignored and reported as warnings.
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "escs/graph.hpp"

namespace escs {

EscsGraph parse_graphml(std::string_view text, std::vector<std::string>* warnings = nullptr);

std::string to_graphml(const EscsGraph& graph);

}  // namespace escs
