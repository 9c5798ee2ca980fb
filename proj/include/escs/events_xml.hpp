/**
 * @file events_xml.hpp
 * @brief Event input file:
 *
 *     <simulation_input>
 *       <event vertex_id="" time="" x="" y="" type="" duration="" patience=""
 *              on_scene="" call_id="" original_call_id=""/>
 *     </simulation_input>
 *
 * `time` is whole seconds; durations are decimal seconds written in shortest
 * round-trip form, so read_events(write_events(s)) == s.
 */
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "escs/arrivals.hpp"

namespace escs {

std::string write_events(std::span<const CallEvent> stream);

std::vector<CallEvent> read_events(std::string_view xml);

}  // namespace escs
