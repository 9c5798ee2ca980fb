/**
 * @file graph.hpp
 * @brief The ESCS network: caller regions, PSAPs and responders joined by
 *        directed communication edges.
 *
 * The graph is immutable once constructed; the constructor validates every
 * structural invariant and throws escs::Error on the first violation.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "escs/geometry.hpp"

namespace escs {

using VertexId = std::int64_t;

enum class VertexKind : std::uint8_t { CallerRegion, Psap, Responder };

enum class CallType : std::uint8_t { Law = 0, Fire = 1, Ems = 2 };

inline constexpr CallType kAllCallTypes[] = {CallType::Law, CallType::Fire, CallType::Ems};

std::string_view to_string(VertexKind kind);
std::string_view to_string(CallType type);
CallType parse_call_type(std::string_view text);

/// Subset of {LAW, FIRE, EMS} a responder can handle.
class CapabilitySet {
public:
    constexpr CapabilitySet() = default;
    constexpr CapabilitySet(std::initializer_list<CallType> types) {
        for (CallType t : types) insert(t);
    }

    constexpr void insert(CallType t) { bits_ |= bit(t); }
    [[nodiscard]] constexpr bool contains(CallType t) const { return (bits_ & bit(t)) != 0; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }

    /// Comma-joined names in LAW,FIRE,EMS order.
    [[nodiscard]] std::string to_string() const;
    static CapabilitySet parse(std::string_view text);

    friend constexpr bool operator==(CapabilitySet, CapabilitySet) = default;

private:
    static constexpr std::uint8_t bit(CallType t) {
        return static_cast<std::uint8_t>(1U << static_cast<unsigned>(t));
    }
    std::uint8_t bits_ = 0;
};

struct Vertex {
    VertexId id = 0;
    VertexKind kind = VertexKind::CallerRegion;
    GeoPoint location;
    std::optional<Rect> region;  // caller regions only
    int servers = 0;             // PSAP
    int trunks = 0;              // PSAP
    int units = 0;               // responder
    CapabilitySet capabilities;  // responder

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

enum class EdgeSemantic : std::uint8_t { Call, Dispatch, Status };

std::string_view to_string(EdgeSemantic semantic);

struct Edge {
    VertexId src = 0;
    VertexId dst = 0;
    EdgeSemantic semantic = EdgeSemantic::Call;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Validated directed graph. Vertices are kept sorted by id; edge ids are
/// positions in the edge list as given.
class EscsGraph {
public:
    EscsGraph() = default;
    EscsGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    [[nodiscard]] std::span<const Vertex> vertices() const { return vertices_; }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
    [[nodiscard]] std::size_t size() const { return vertices_.size(); }
    [[nodiscard]] bool empty() const { return vertices_.empty(); }

    [[nodiscard]] std::optional<std::size_t> index_of(VertexId id) const;
    /// Throws escs::Error when `id` is unknown.
    [[nodiscard]] std::size_t require_index(VertexId id) const;
    [[nodiscard]] const Vertex& vertex(VertexId id) const { return vertices_[require_index(id)]; }

    /// Edge ids entering / leaving the vertex at dense index `index`, ascending.
    [[nodiscard]] std::span<const std::size_t> in_edges(std::size_t index) const {
        return in_edges_[index];
    }
    [[nodiscard]] std::span<const std::size_t> out_edges(std::size_t index) const {
        return out_edges_[index];
    }

    /// The single CALL edge leaving caller region at dense index `index`.
    [[nodiscard]] std::size_t call_edge(std::size_t index) const;

    /// Smallest rectangle covering all caller regions; invalid when there are none.
    [[nodiscard]] Rect coverage() const;

    friend bool operator==(const EscsGraph& a, const EscsGraph& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    void validate() const;

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<VertexId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> in_edges_;
    std::vector<std::vector<std::size_t>> out_edges_;
};

/// Capable responder reachable from `psap` over a DISPATCH edge that is
/// closest to `incident`; ties go to the lowest vertex id.
VertexId nearest_responder(const EscsGraph& graph, VertexId psap, GeoPoint incident, CallType type);

/// Caller region whose rectangle contains `p`; boundary points go to the lowest id.
VertexId locate_region(const EscsGraph& graph, GeoPoint p);

}  // namespace escs
