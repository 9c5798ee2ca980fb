#include "escs/events_xml.hpp"

#include <charconv>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {
namespace {

namespace pt = boost::property_tree;

template <class T>
T parse_attr(const pt::ptree& attrs, const char* name, std::size_t index) {
    const auto text = attrs.get_optional<std::string>(name);
    if (!text) throw Error(fmt::format("event #{}: missing attribute '{}'", index, name));
    T value{};
    const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc{} || ptr != text->data() + text->size()) {
        throw Error(fmt::format("event #{}: attribute '{}' is not a valid number: '{}'", index, name,
                                *text));
    }
    return value;
}

}  // namespace

std::string write_events(std::span<const CallEvent> stream) {
    std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<simulation_input>\n";
    for (const CallEvent& e : stream) {
        fmt::format_to(std::back_inserter(out),
                       "  <event vertex_id=\"{}\" time=\"{}\" x=\"{}\" y=\"{}\" type=\"{}\" "
                       "duration=\"{}\" patience=\"{}\" on_scene=\"{}\" call_id=\"{}\" "
                       "original_call_id=\"{}\"/>\n",
                       e.region, e.time, e.location.x, e.location.y, to_string(e.type),
                       e.service_duration, e.patience, e.on_scene_duration, e.id, e.original_id);
    }
    out += "</simulation_input>\n";
    return out;
}

std::vector<CallEvent> read_events(std::string_view xml) {
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw Error(fmt::format("malformed event XML: {}", e.message()));
    }
    const auto root = doc.get_child_optional("simulation_input");
    if (!root) throw Error("malformed event XML: missing <simulation_input> root");

    std::vector<CallEvent> stream;
    std::size_t index = 0;
    for (const auto& [tag, element] : *root) {
        if (tag != "event") continue;
        const auto attrs_opt = element.get_child_optional("<xmlattr>");
        const pt::ptree empty;
        const pt::ptree& attrs = attrs_opt ? *attrs_opt : empty;

        CallEvent e;
        e.region = parse_attr<VertexId>(attrs, "vertex_id", index);
        e.time = parse_attr<std::int64_t>(attrs, "time", index);
        e.location.x = parse_attr<double>(attrs, "x", index);
        e.location.y = parse_attr<double>(attrs, "y", index);
        const auto type = attrs.get_optional<std::string>("type");
        if (!type) throw Error(fmt::format("event #{}: missing attribute 'type'", index));
        try {
            e.type = parse_call_type(*type);
        } catch (const Error& err) {
            throw Error(fmt::format("event #{}: {}", index, err.what()));
        }
        e.service_duration = parse_attr<double>(attrs, "duration", index);
        e.patience = parse_attr<double>(attrs, "patience", index);
        e.on_scene_duration = parse_attr<double>(attrs, "on_scene", index);
        e.id = parse_attr<CallId>(attrs, "call_id", index);
        e.original_id = attrs.get_optional<std::string>("original_call_id")
                            ? parse_attr<CallId>(attrs, "original_call_id", index)
                            : e.id;
        if (e.time < 0) throw Error(fmt::format("event #{}: negative time", index));
        if (e.service_duration < 0.0 || e.patience < 0.0 || e.on_scene_duration < 0.0) {
            throw Error(fmt::format("event #{}: negative duration", index));
        }
        stream.push_back(e);
        ++index;
    }
    return stream;
}

}  // namespace escs
