#include "escs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "escs/error.hpp"

namespace escs {

std::string_view to_string(VertexKind kind) {
    switch (kind) {
    case VertexKind::CallerRegion: return "CALR";
    case VertexKind::Psap: return "PSAP";
    case VertexKind::Responder: return "RESP";
    }
    return "?";
}

std::string_view to_string(CallType type) {
    switch (type) {
    case CallType::Law: return "LAW";
    case CallType::Fire: return "FIRE";
    case CallType::Ems: return "EMS";
    }
    return "?";
}

CallType parse_call_type(std::string_view text) {
    for (CallType t : kAllCallTypes) {
        if (text == to_string(t)) return t;
    }
    throw Error(fmt::format("unknown call type '{}'", text));
}

std::string_view to_string(EdgeSemantic semantic) {
    switch (semantic) {
    case EdgeSemantic::Call: return "CALL";
    case EdgeSemantic::Dispatch: return "DISPATCH";
    case EdgeSemantic::Status: return "STATUS";
    }
    return "?";
}

std::string CapabilitySet::to_string() const {
    std::string out;
    for (CallType t : kAllCallTypes) {
        if (!contains(t)) continue;
        if (!out.empty()) out += ',';
        out += escs::to_string(t);
    }
    return out;
}

CapabilitySet CapabilitySet::parse(std::string_view text) {
    CapabilitySet caps;
    while (!text.empty()) {
        const auto comma = text.find(',');
        auto token = text.substr(0, comma);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) caps.insert(parse_call_type(token));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return caps;
}

EscsGraph::EscsGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    index_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!index_.emplace(vertices_[i].id, i).second) {
            throw Error(fmt::format("duplicate vertex id {}", vertices_[i].id));
        }
    }
    in_edges_.resize(vertices_.size());
    out_edges_.resize(vertices_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto src = index_of(edges_[e].src);
        const auto dst = index_of(edges_[e].dst);
        if (!src || !dst) {
            throw Error(fmt::format("dangling edge {}: {} -> {}", e, edges_[e].src, edges_[e].dst));
        }
        out_edges_[*src].push_back(e);
        in_edges_[*dst].push_back(e);
    }
    validate();
}

void EscsGraph::validate() const {
    for (const Vertex& v : vertices_) {
        if (!std::isfinite(v.location.x) || !std::isfinite(v.location.y)) {
            throw Error(fmt::format("vertex {}: non-finite coordinates", v.id));
        }
        switch (v.kind) {
        case VertexKind::CallerRegion:
            if (!v.region || !v.region->valid()) {
                throw Error(fmt::format("caller region {}: missing or degenerate boundary", v.id));
            }
            break;
        case VertexKind::Psap:
            if (v.servers < 1) throw Error(fmt::format("PSAP {}: servers must be >= 1", v.id));
            if (v.trunks < v.servers) {
                throw Error(fmt::format("PSAP {}: trunks < servers ({} < {})", v.id, v.trunks,
                                        v.servers));
            }
            break;
        case VertexKind::Responder:
            if (v.units < 1) throw Error(fmt::format("responder {}: units must be >= 1", v.id));
            if (v.capabilities.empty()) {
                throw Error(fmt::format("responder {}: empty capability set", v.id));
            }
            break;
        }
    }

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        const VertexKind src = vertices_[*index_of(edge.src)].kind;
        const VertexKind dst = vertices_[*index_of(edge.dst)].kind;
        const bool ok = (edge.semantic == EdgeSemantic::Call && src == VertexKind::CallerRegion &&
                         dst == VertexKind::Psap) ||
                        (edge.semantic == EdgeSemantic::Dispatch && src == VertexKind::Psap &&
                         dst == VertexKind::Responder) ||
                        (edge.semantic == EdgeSemantic::Status && src == VertexKind::Responder &&
                         dst == VertexKind::Psap);
        if (!ok) {
            throw Error(fmt::format("edge {} ({} -> {}): semantic {} inconsistent with {} -> {}", e,
                                    edge.src, edge.dst, to_string(edge.semantic), to_string(src),
                                    to_string(dst)));
        }
    }

    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vertex& v = vertices_[i];
        if (v.kind == VertexKind::CallerRegion) {
            const auto calls = std::count_if(out_edges_[i].begin(), out_edges_[i].end(), [&](auto e) {
                return edges_[e].semantic == EdgeSemantic::Call;
            });
            if (calls != 1) {
                throw Error(fmt::format("caller region {}: expected exactly one CALL edge, found {}",
                                        v.id, calls));
            }
        }
        if (v.kind == VertexKind::Psap) {
            const bool receives = std::any_of(in_edges_[i].begin(), in_edges_[i].end(), [&](auto e) {
                return edges_[e].semantic == EdgeSemantic::Call;
            });
            if (!receives) continue;
            for (CallType t : kAllCallTypes) {
                const bool served =
                    std::any_of(out_edges_[i].begin(), out_edges_[i].end(), [&](auto e) {
                        const Vertex& dst = vertices_[*index_of(edges_[e].dst)];
                        return edges_[e].semantic == EdgeSemantic::Dispatch &&
                               dst.capabilities.contains(t);
                    });
                if (!served) {
                    throw Error(fmt::format("PSAP {}: no DISPATCH edge to a responder handling {}",
                                            v.id, to_string(t)));
                }
            }
        }
    }

    // Regions routed to the same PSAP may touch but must not overlap.
    std::unordered_map<VertexId, std::vector<const Rect*>> by_psap;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].kind != VertexKind::CallerRegion) continue;
        by_psap[edges_[call_edge(i)].dst].push_back(&*vertices_[i].region);
    }
    for (const auto& [psap, rects] : by_psap) {
        for (std::size_t a = 0; a < rects.size(); ++a) {
            for (std::size_t b = a + 1; b < rects.size(); ++b) {
                const Rect& r = *rects[a];
                const Rect& s = *rects[b];
                const bool overlap =
                    r.xmin < s.xmax && s.xmin < r.xmax && r.ymin < s.ymax && s.ymin < r.ymax;
                if (overlap) {
                    throw Error(fmt::format("PSAP {}: overlapping caller region boundaries", psap));
                }
            }
        }
    }
}

std::optional<std::size_t> EscsGraph::index_of(VertexId id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t EscsGraph::require_index(VertexId id) const {
    const auto idx = index_of(id);
    if (!idx) throw Error(fmt::format("unknown vertex id {}", id));
    return *idx;
}

std::size_t EscsGraph::call_edge(std::size_t index) const {
    for (std::size_t e : out_edges_[index]) {
        if (edges_[e].semantic == EdgeSemantic::Call) return e;
    }
    throw Error(fmt::format("vertex {} has no CALL edge", vertices_[index].id));
}

Rect EscsGraph::coverage() const {
    Rect box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Vertex& v : vertices_) {
        if (!v.region) continue;
        box.xmin = std::min(box.xmin, v.region->xmin);
        box.ymin = std::min(box.ymin, v.region->ymin);
        box.xmax = std::max(box.xmax, v.region->xmax);
        box.ymax = std::max(box.ymax, v.region->ymax);
    }
    return box;
}

VertexId nearest_responder(const EscsGraph& graph, VertexId psap, GeoPoint incident, CallType type) {
    const std::size_t from = graph.require_index(psap);
    std::optional<VertexId> best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t e : graph.out_edges(from)) {
        const Edge& edge = graph.edges()[e];
        if (edge.semantic != EdgeSemantic::Dispatch) continue;
        const Vertex& responder = graph.vertex(edge.dst);
        if (!responder.capabilities.contains(type)) continue;
        const double d = distance(responder.location, incident);
        if (d < best_distance || (d == best_distance && responder.id < *best)) {
            best = responder.id;
            best_distance = d;
        }
    }
    if (!best) {
        throw Error(fmt::format("PSAP {}: no reachable responder for {} calls", psap, to_string(type)));
    }
    return *best;
}

VertexId locate_region(const EscsGraph& graph, GeoPoint p) {
    for (const Vertex& v : graph.vertices()) {
        if (v.kind == VertexKind::CallerRegion && v.region->contains(p)) return v.id;
    }
    throw Error(fmt::format("point ({}, {}) lies outside every caller region", p.x, p.y));
}

}  // namespace escs
