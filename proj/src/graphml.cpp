#include "escs/graphml.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string, std::less<>> kNodeKeys = {"type", "x",     "y",    "servers",
                                                      "trunks", "units", "capability", "xmin",
                                                      "ymin", "xmax",  "ymax"};

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double parse_double(const std::string& text, std::string_view what) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(fmt::format("{}: expected a number, got '{}'", what, text));
    }
    return value;
}

long long parse_integer(const std::string& text, std::string_view what) {
    const std::string t = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(fmt::format("{}: expected an integer, got '{}'", what, text));
    }
    return value;
}

int parse_count(const std::string& text, std::string_view what) {
    const long long v = parse_integer(text, what);
    if (v < 0 || v > 1'000'000'000) throw Error(fmt::format("{}: count out of range", what));
    return static_cast<int>(v);
}

/// Attribute path with '/' as separator, since GraphML attribute names contain dots.
pt::ptree::path_type xml_attribute(const char* name) {
    return pt::ptree::path_type(std::string("<xmlattr>/") + name, '/');
}

std::string attribute(const pt::ptree& node, const char* name) {
    const auto value = node.get_optional<std::string>(xml_attribute(name));
    return value ? *value : std::string{};
}

/// Collects <data key="..."> children, mapping key ids to attr.names.
std::map<std::string, std::string> data_of(const pt::ptree& element,
                                           const std::map<std::string, std::string>& key_names) {
    std::map<std::string, std::string> out;
    for (const auto& [tag, child] : element) {
        if (tag != "data") continue;
        std::string key = attribute(child, "key");
        if (const auto it = key_names.find(key); it != key_names.end()) key = it->second;
        out[key] = child.get_value<std::string>();
    }
    return out;
}

const std::string& require(const std::map<std::string, std::string>& data, const std::string& key,
                           const std::string& where) {
    const auto it = data.find(key);
    if (it == data.end()) throw Error(fmt::format("{}: missing required attribute '{}'", where, key));
    return it->second;
}

VertexKind parse_kind(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t == "CALR") return VertexKind::CallerRegion;
    if (t == "PSAP") return VertexKind::Psap;
    if (t == "RESP") return VertexKind::Responder;
    throw Error(fmt::format("{}: unknown vertex kind '{}'", where, text));
}

EdgeSemantic parse_semantic(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t == "CALL") return EdgeSemantic::Call;
    if (t == "DISPATCH") return EdgeSemantic::Dispatch;
    if (t == "STATUS") return EdgeSemantic::Status;
    throw Error(fmt::format("{}: unknown edge semantic '{}'", where, text));
}

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

EscsGraph parse_graphml(std::string_view text, std::vector<std::string>* warnings) {
    pt::ptree doc;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw Error(fmt::format("malformed GraphML: {}", e.message()));
    }
    const auto root = doc.get_child_optional("graphml");
    if (!root) throw Error("malformed GraphML: missing <graphml> root");

    std::map<std::string, std::string> key_names;
    for (const auto& [tag, child] : *root) {
        if (tag != "key") continue;
        const std::string id = attribute(child, "id");
        const std::string name = attribute(child, "attr.name");
        key_names[id] = name.empty() ? id : name;
    }

    const auto graph = root->get_child_optional("graph");
    if (!graph) throw Error("malformed GraphML: missing <graph> element");

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::set<std::string> warned;
    std::size_t node_index = 0;
    std::size_t edge_index = 0;
    for (const auto& [tag, child] : *graph) {
        if (tag == "node") {
            const std::string where = fmt::format("node #{}", node_index++);
            const std::string id_text = attribute(child, "id");
            if (id_text.empty()) throw Error(where + ": missing required attribute 'id'");
            const auto data = data_of(child, key_names);
            for (const auto& [key, value] : data) {
                if (!kNodeKeys.contains(key) && warned.insert("node:" + key).second) {
                    warn(warnings, fmt::format("ignoring unknown node key '{}'", key));
                }
            }
            Vertex v;
            v.id = parse_integer(id_text, where + " id");
            v.kind = parse_kind(require(data, "type", where), where);
            v.location.x = parse_double(require(data, "x", where), where + " x");
            v.location.y = parse_double(require(data, "y", where), where + " y");
            switch (v.kind) {
            case VertexKind::CallerRegion:
                v.region = Rect{parse_double(require(data, "xmin", where), where + " xmin"),
                                parse_double(require(data, "ymin", where), where + " ymin"),
                                parse_double(require(data, "xmax", where), where + " xmax"),
                                parse_double(require(data, "ymax", where), where + " ymax")};
                break;
            case VertexKind::Psap:
                v.servers = parse_count(require(data, "servers", where), where + " servers");
                v.trunks = parse_count(require(data, "trunks", where), where + " trunks");
                break;
            case VertexKind::Responder:
                v.units = parse_count(require(data, "units", where), where + " units");
                v.capabilities = CapabilitySet::parse(require(data, "capability", where));
                break;
            }
            vertices.push_back(v);
        } else if (tag == "edge") {
            const std::string where = fmt::format("edge #{}", edge_index++);
            const auto data = data_of(child, key_names);
            for (const auto& [key, value] : data) {
                if (key != "semantic" && warned.insert("edge:" + key).second) {
                    warn(warnings, fmt::format("ignoring unknown edge key '{}'", key));
                }
            }
            const std::string src = attribute(child, "source");
            const std::string dst = attribute(child, "target");
            if (src.empty() || dst.empty()) {
                throw Error(where + ": missing required attribute 'source'/'target'");
            }
            edges.push_back(Edge{parse_integer(src, where + " source"),
                                 parse_integer(dst, where + " target"),
                                 parse_semantic(require(data, "semantic", where), where)});
        }
    }
    return EscsGraph(std::move(vertices), std::move(edges));
}

std::string to_graphml(const EscsGraph& graph) {
    pt::ptree root;
    pt::ptree& graphml = root.add("graphml", "");
    graphml.put("<xmlattr>.xmlns", "http://graphml.graphdrawing.org/xmlns");

    const auto add_key = [&](const std::string& name, const char* domain, const char* type) {
        pt::ptree& key = graphml.add("key", "");
        key.put("<xmlattr>.id", name);
        key.put("<xmlattr>.for", domain);
        key.put(xml_attribute("attr.name"), name);
        key.put(xml_attribute("attr.type"), type);
    };
    add_key("type", "node", "string");
    for (const char* k : {"x", "y", "xmin", "ymin", "xmax", "ymax"}) add_key(k, "node", "double");
    for (const char* k : {"servers", "trunks", "units"}) add_key(k, "node", "int");
    add_key("capability", "node", "string");
    add_key("semantic", "edge", "string");

    pt::ptree& g = graphml.add("graph", "");
    g.put("<xmlattr>.id", "escs");
    g.put("<xmlattr>.edgedefault", "directed");

    const auto add_data = [](pt::ptree& element, const char* key, const std::string& value) {
        pt::ptree& data = element.add("data", value);
        data.put("<xmlattr>.key", key);
    };
    const auto num = [](double v) { return fmt::format("{}", v); };

    for (const Vertex& v : graph.vertices()) {
        pt::ptree& node = g.add("node", "");
        node.put("<xmlattr>.id", std::to_string(v.id));
        add_data(node, "type", std::string(to_string(v.kind)));
        add_data(node, "x", num(v.location.x));
        add_data(node, "y", num(v.location.y));
        switch (v.kind) {
        case VertexKind::CallerRegion:
            add_data(node, "xmin", num(v.region->xmin));
            add_data(node, "ymin", num(v.region->ymin));
            add_data(node, "xmax", num(v.region->xmax));
            add_data(node, "ymax", num(v.region->ymax));
            break;
        case VertexKind::Psap:
            add_data(node, "servers", std::to_string(v.servers));
            add_data(node, "trunks", std::to_string(v.trunks));
            break;
        case VertexKind::Responder:
            add_data(node, "units", std::to_string(v.units));
            add_data(node, "capability", v.capabilities.to_string());
            break;
        }
    }
    std::size_t e = 0;
    for (const Edge& edge : graph.edges()) {
        pt::ptree& element = g.add("edge", "");
        element.put("<xmlattr>.id", fmt::format("e{}", e++));
        element.put("<xmlattr>.source", std::to_string(edge.src));
        element.put("<xmlattr>.target", std::to_string(edge.dst));
        add_data(element, "semantic", std::string(to_string(edge.semantic)));
    }

    std::ostringstream out;
    pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
    return out.str();
}

}  // namespace escs
