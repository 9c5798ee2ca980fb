#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "escs/arrivals.hpp"
#include "escs/config.hpp"
#include "escs/graph.hpp"

namespace escs::testing {

inline Vertex psap_vertex(VertexId id, GeoPoint at, int servers, int trunks) {
    Vertex v;
    v.id = id;
    v.kind = VertexKind::Psap;
    v.location = at;
    v.servers = servers;
    v.trunks = trunks;
    return v;
}

inline Vertex responder_vertex(VertexId id, GeoPoint at, int units, CapabilitySet caps) {
    Vertex v;
    v.id = id;
    v.kind = VertexKind::Responder;
    v.location = at;
    v.units = units;
    v.capabilities = caps;
    return v;
}

inline Vertex region_vertex(VertexId id, Rect r) {
    Vertex v;
    v.id = id;
    v.kind = VertexKind::CallerRegion;
    v.location = r.center();
    v.region = r;
    return v;
}

inline const CapabilitySet kAllTypes{CallType::Law, CallType::Fire, CallType::Ems};

/// One region (id 0), one PSAP (id 1), one all-purpose responder (id 2).
inline EscsGraph single_psap(int servers, int trunks, int units = 1000) {
    std::vector<Vertex> v = {region_vertex(0, {0, 0, 1000, 1000}),
                             psap_vertex(1, {500, 500}, servers, trunks),
                             responder_vertex(2, {0, 0}, units, kAllTypes)};
    std::vector<Edge> e = {{0, 1, EdgeSemantic::Call},
                           {1, 2, EdgeSemantic::Dispatch},
                           {2, 1, EdgeSemantic::Status}};
    return EscsGraph(std::move(v), std::move(e));
}

inline CallEvent make_call(CallId id, VertexId region, std::int64_t time, double service,
                           double patience, CallType type = CallType::Law,
                           GeoPoint at = {100, 100}) {
    CallEvent c;
    c.id = id;
    c.original_id = id;
    c.region = region;
    c.time = time;
    c.location = at;
    c.type = type;
    c.service_duration = service;
    c.patience = patience;
    c.on_scene_duration = 60.0;
    return c;
}

/// Random valid graph with `n` vertices: 1-2 PSAPs, 2-3 responders, the
/// rest caller regions laid out as vertical strips. Ids are shuffled so the
/// dense order differs from the construction order.
inline EscsGraph random_graph(std::mt19937_64& rng, int n = 10) {
    std::uniform_int_distribution<int> pick_psaps(1, 2), pick_resp(2, 3), small(1, 3);
    std::uniform_real_distribution<double> coord(0.0, 5000.0);
    const int psaps = pick_psaps(rng);
    const int responders = pick_resp(rng);
    const int regions = n - psaps - responders;

    std::vector<VertexId> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = 100 + 7 * i;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::size_t next = 0;

    std::vector<Vertex> v;
    std::vector<Edge> e;
    std::vector<VertexId> psap_ids, resp_ids;
    for (int i = 0; i < psaps; ++i) {
        const int servers = small(rng);
        v.push_back(psap_vertex(ids[next], {coord(rng), coord(rng)}, servers, servers + small(rng) - 1));
        psap_ids.push_back(ids[next++]);
    }
    const CapabilitySet options[] = {kAllTypes, {CallType::Law}, {CallType::Fire, CallType::Ems}, {CallType::Ems}};
    std::uniform_int_distribution<int> cap(1, 3);
    for (int i = 0; i < responders; ++i) {
        const CapabilitySet caps = i == 0 ? kAllTypes : options[cap(rng)];
        v.push_back(responder_vertex(ids[next], {coord(rng), coord(rng)}, small(rng), caps));
        resp_ids.push_back(ids[next++]);
    }
    std::uniform_int_distribution<std::size_t> which_psap(0, psap_ids.size() - 1);
    const double width = 5000.0 / regions;
    for (int i = 0; i < regions; ++i) {
        Rect r{i * width, 0.0, (i + 1) * width, 5000.0};
        v.push_back(region_vertex(ids[next], r));
        e.push_back({ids[next++], psap_ids[which_psap(rng)], EdgeSemantic::Call});
    }
    for (VertexId p : psap_ids) {
        for (VertexId r : resp_ids) {
            e.push_back({p, r, EdgeSemantic::Dispatch});
            e.push_back({r, p, EdgeSemantic::Status});
        }
    }
    std::shuffle(e.begin(), e.end(), rng);
    return EscsGraph(std::move(v), std::move(e));
}

/// Heavy random traffic over the caller regions of `graph`.
inline std::vector<CallEvent> random_calls(const EscsGraph& graph, std::mt19937_64& rng,
                                           std::size_t count, std::int64_t horizon) {
    std::vector<VertexId> regions;
    for (const Vertex& v : graph.vertices()) {
        if (v.kind == VertexKind::CallerRegion) regions.push_back(v.id);
    }
    std::uniform_int_distribution<std::size_t> region(0, regions.size() - 1);
    std::uniform_int_distribution<std::int64_t> time(0, horizon - 1);
    std::uniform_real_distribution<double> coord(0.0, 5000.0), service(1.0, 40.0), patience(0.5, 20.0);
    std::uniform_int_distribution<int> type(0, 2);
    std::vector<CallEvent> calls;
    for (std::size_t i = 0; i < count; ++i) {
        calls.push_back(make_call(i, regions[region(rng)], time(rng), service(rng), patience(rng),
                                  static_cast<CallType>(type(rng)), {coord(rng), coord(rng)}));
    }
    std::stable_sort(calls.begin(), calls.end(),
                     [](const CallEvent& a, const CallEvent& b) { return a.time < b.time; });
    return calls;
}

}  // namespace escs::testing
