#include "escs/synthesize.hpp"

#include <limits>
#include <vector>

#include <boost/random/uniform_real_distribution.hpp>
#include <fmt/format.h>

#include "escs/error.hpp"
#include "escs/rng.hpp"

namespace escs {

EscsGraph synthesize_network(const NetworkSpec& spec) {
    if (!spec.bounds.valid()) throw Error("network bounding box has zero area");
    if (spec.psaps < 1 || spec.fire_ems_stations < 0 || spec.law_stations < 0 ||
        spec.fire_ems_stations + spec.law_stations < 1 || spec.grid_rows < 1 || spec.grid_cols < 1) {
        throw Error("network counts must be >= 1");
    }
    if (spec.fire_ems_stations < 1 || spec.law_stations < 1) {
        throw Error("network needs at least one FIRE+EMS station and one LAW station");
    }
    if (spec.servers < 1 || spec.trunks < spec.servers) throw Error("PSAP staffing: need 1 <= servers <= trunks");
    if (spec.fire_ems_units < 1 || spec.law_units < 1) throw Error("responder units must be >= 1");

    Rng rng = make_stream(spec.seed, kNetworkStream);
    boost::random::uniform_real_distribution<double> ux(spec.bounds.xmin, spec.bounds.xmax);
    boost::random::uniform_real_distribution<double> uy(spec.bounds.ymin, spec.bounds.ymax);
    const auto place = [&] {
        const double x = ux(rng);
        return GeoPoint{x, uy(rng)};
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    VertexId next = 0;

    std::vector<VertexId> psaps;
    for (int i = 0; i < spec.psaps; ++i) {
        Vertex v;
        v.id = next++;
        v.kind = VertexKind::Psap;
        v.location = place();
        v.servers = spec.servers;
        v.trunks = spec.trunks;
        psaps.push_back(v.id);
        vertices.push_back(v);
    }
    std::vector<VertexId> responders;
    const auto add_responders = [&](int count, int units, CapabilitySet caps) {
        for (int i = 0; i < count; ++i) {
            Vertex v;
            v.id = next++;
            v.kind = VertexKind::Responder;
            v.location = place();
            v.units = units;
            v.capabilities = caps;
            responders.push_back(v.id);
            vertices.push_back(v);
        }
    };
    add_responders(spec.fire_ems_stations, spec.fire_ems_units, {CallType::Fire, CallType::Ems});
    add_responders(spec.law_stations, spec.law_units, {CallType::Law});

    const double cell_w = spec.bounds.width() / spec.grid_cols;
    const double cell_h = spec.bounds.height() / spec.grid_rows;
    for (int r = 0; r < spec.grid_rows; ++r) {
        for (int c = 0; c < spec.grid_cols; ++c) {
            // Outer edges snap to the box so the tiling covers it exactly.
            Rect cell{spec.bounds.xmin + c * cell_w, spec.bounds.ymin + r * cell_h,
                      c + 1 == spec.grid_cols ? spec.bounds.xmax : spec.bounds.xmin + (c + 1) * cell_w,
                      r + 1 == spec.grid_rows ? spec.bounds.ymax : spec.bounds.ymin + (r + 1) * cell_h};
            Vertex v;
            v.id = next++;
            v.kind = VertexKind::CallerRegion;
            v.location = cell.center();
            v.region = cell;

            VertexId target = psaps.front();
            double best = std::numeric_limits<double>::infinity();
            for (VertexId p : psaps) {
                const double d = distance(vertices[static_cast<std::size_t>(p)].location, v.location);
                if (d < best) {
                    best = d;
                    target = p;
                }
            }
            edges.push_back({v.id, target, EdgeSemantic::Call});
            vertices.push_back(v);
        }
    }
    for (VertexId p : psaps) {
        for (VertexId r : responders) edges.push_back({p, r, EdgeSemantic::Dispatch});
    }
    for (VertexId r : responders) {
        for (VertexId p : psaps) edges.push_back({r, p, EdgeSemantic::Status});
    }
    return EscsGraph(std::move(vertices), std::move(edges));
}

}  // namespace escs
