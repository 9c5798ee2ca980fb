#include <gtest/gtest.h>

#include <random>

#include "escs/error.hpp"
#include "escs/graph.hpp"
#include "escs/graphml.hpp"
#include "escs/synthesize.hpp"
#include "fixtures.hpp"

using namespace escs;
using namespace escs::testing;

namespace {

const char* kMinimal = R"(<?xml version="1.0"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key id="d0" for="node" attr.name="type" attr.type="string"/>
  <key id="d1" for="node" attr.name="x" attr.type="double"/>
  <key id="d2" for="node" attr.name="y" attr.type="double"/>
  <key id="d3" for="node" attr.name="servers" attr.type="int"/>
  <key id="d4" for="node" attr.name="trunks" attr.type="int"/>
  <key id="d5" for="node" attr.name="units" attr.type="int"/>
  <key id="d6" for="node" attr.name="capability" attr.type="string"/>
  <key id="d7" for="node" attr.name="xmin" attr.type="double"/>
  <key id="d8" for="node" attr.name="ymin" attr.type="double"/>
  <key id="d9" for="node" attr.name="xmax" attr.type="double"/>
  <key id="d10" for="node" attr.name="ymax" attr.type="double"/>
  <key id="e0" for="edge" attr.name="semantic" attr.type="string"/>
  <graph edgedefault="directed">
    <node id="0"><data key="d0">CALR</data><data key="d1">50</data><data key="d2">50</data>
      <data key="d7">0</data><data key="d8">0</data><data key="d9">100</data><data key="d10">100</data></node>
    <node id="1"><data key="d0">PSAP</data><data key="d1">10</data><data key="d2">10</data>
      <data key="d3">6</data><data key="d4">TRUNKS</data></node>
    <node id="2"><data key="d0">RESP</data><data key="d1">90</data><data key="d2">90</data>
      <data key="d5">2</data><data key="d6">LAW,FIRE,EMS</data></node>
    <edge source="0" target="1"><data key="e0">CALL</data></edge>
    <edge source="1" target="2"><data key="e0">DISPATCH</data></edge>
    <edge source="2" target="1"><data key="e0">STATUS</data></edge>
  </graph>
</graphml>
)";

std::string minimal(int trunks) {
    std::string s = kMinimal;
    s.replace(s.find("TRUNKS"), 6, std::to_string(trunks));
    return s;
}

bool message_contains(const std::function<void()>& f, const std::string& needle) {
    try {
        f();
    } catch (const Error& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST(GraphmlTest, MinimalDocumentParses) {
    const EscsGraph g = parse_graphml(minimal(16));
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g.edges().size(), 3u);
    EXPECT_EQ(g.vertex(1).servers, 6);
    EXPECT_EQ(g.vertex(1).trunks, 16);
    EXPECT_TRUE(g.vertex(2).capabilities.contains(CallType::Fire));
    EXPECT_EQ(g.vertex(0).region, (Rect{0, 0, 100, 100}));
}

TEST(GraphmlTest, TrunksBelowServersRejected) {
    EXPECT_TRUE(message_contains([] { parse_graphml(minimal(5)); }, "trunks < servers"));
}

TEST(GraphmlTest, MalformedXmlRejected) {
    EXPECT_TRUE(message_contains([] { parse_graphml("<graphml><graph>"); }, "malformed"));
}

TEST(GraphmlTest, MissingAttributeNamed) {
    std::string s = minimal(16);
    const auto pos = s.find("<data key=\"d5\">2</data>");
    s.erase(pos, std::string("<data key=\"d5\">2</data>").size());
    EXPECT_TRUE(message_contains([&] { parse_graphml(s); }, "'units'"));
}

TEST(GraphmlTest, UnknownKindRejected) {
    std::string s = minimal(16);
    s.replace(s.find("RESP"), 4, "TANK");
    EXPECT_TRUE(message_contains([&] { parse_graphml(s); }, "unknown vertex kind"));
}

TEST(GraphmlTest, DanglingEdgeRejected) {
    std::string s = minimal(16);
    s.replace(s.find("source=\"2\" target=\"1\""), 21, "source=\"9\" target=\"1\"");
    EXPECT_TRUE(message_contains([&] { parse_graphml(s); }, "dangling"));
}

TEST(GraphmlTest, UnknownKeysWarn) {
    std::string s = minimal(16);
    s.replace(s.find("<graph "), 0, "<key id=\"z\" for=\"node\" attr.name=\"colour\"/>\n");
    s.replace(s.find("<data key=\"d5\">"), 0, "<data key=\"z\">red</data>");
    std::vector<std::string> warnings;
    const EscsGraph g = parse_graphml(s, &warnings);
    EXPECT_EQ(g.size(), 3u);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("colour"), std::string::npos);
}

TEST(GraphmlTest, WrittenKeysCarryAttributeNames) {
    const std::string xml = to_graphml(single_psap(2, 3));
    EXPECT_NE(xml.find(R"(attr.name="type")"), std::string::npos);
    EXPECT_NE(xml.find(R"(attr.type="int")"), std::string::npos);
    EXPECT_EQ(xml.find("<attr>"), std::string::npos);
}

TEST(GraphmlTest, RoundTripRandomGraphs) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const EscsGraph g = random_graph(rng);
        EXPECT_EQ(parse_graphml(to_graphml(g)), g);
    }
    const EscsGraph seattle = synthesize_network({});
    EXPECT_EQ(parse_graphml(to_graphml(seattle)), seattle);
}

TEST(GraphTest, ValidationErrors) {
    const Rect box{0, 0, 10, 10};
    // duplicate id
    EXPECT_THROW(EscsGraph({region_vertex(0, box), region_vertex(0, box)}, {}), Error);
    // region without CALL edge
    EXPECT_THROW(EscsGraph({region_vertex(0, box)}, {}), Error);
    // responder with no capabilities
    EXPECT_THROW(EscsGraph({responder_vertex(0, {0, 0}, 1, {})}, {}), Error);
    // semantic inconsistent with endpoints
    EXPECT_THROW(EscsGraph({region_vertex(0, box), psap_vertex(1, {0, 0}, 1, 1),
                            responder_vertex(2, {0, 0}, 1, kAllTypes)},
                           {{0, 1, EdgeSemantic::Dispatch}, {1, 2, EdgeSemantic::Dispatch}}),
                 Error);
    // PSAP taking calls that cannot dispatch FIRE
    EXPECT_THROW(EscsGraph({region_vertex(0, box), psap_vertex(1, {0, 0}, 1, 1),
                            responder_vertex(2, {0, 0}, 1, {CallType::Law, CallType::Ems})},
                           {{0, 1, EdgeSemantic::Call}, {1, 2, EdgeSemantic::Dispatch}}),
                 Error);
    // overlapping regions on one PSAP
    EXPECT_THROW(EscsGraph({region_vertex(0, box), region_vertex(3, {5, 5, 15, 15}),
                            psap_vertex(1, {0, 0}, 1, 1), responder_vertex(2, {0, 0}, 1, kAllTypes)},
                           {{0, 1, EdgeSemantic::Call}, {3, 1, EdgeSemantic::Call},
                            {1, 2, EdgeSemantic::Dispatch}}),
                 Error);
}

TEST(GraphTest, NearestResponderPicksClosestCapableLowestIdOnTies) {
    std::vector<Vertex> v = {region_vertex(0, {0, 0, 100, 100}), psap_vertex(1, {0, 0}, 1, 1),
                             responder_vertex(5, {10, 0}, 1, {CallType::Law}),
                             responder_vertex(3, {-10, 0}, 1, {CallType::Law}),
                             responder_vertex(4, {1, 0}, 1, {CallType::Fire, CallType::Ems})};
    std::vector<Edge> e = {{0, 1, EdgeSemantic::Call}};
    for (VertexId r : {5, 3, 4}) e.push_back({1, r, EdgeSemantic::Dispatch});
    const EscsGraph g(v, e);
    EXPECT_EQ(nearest_responder(g, 1, {0, 0}, CallType::Law), 3);  // tie at distance 10
    EXPECT_EQ(nearest_responder(g, 1, {6, 0}, CallType::Law), 5);
    EXPECT_EQ(nearest_responder(g, 1, {6, 0}, CallType::Fire), 4);
}

TEST(GraphTest, NearestResponderNoCapableResponderNamesType) {
    std::vector<Vertex> v = {psap_vertex(1, {0, 0}, 1, 1), responder_vertex(2, {1, 0}, 1, {CallType::Law})};
    const EscsGraph g(v, {{1, 2, EdgeSemantic::Dispatch}});
    EXPECT_TRUE(message_contains([&] { nearest_responder(g, 1, {0, 0}, CallType::Ems); }, "EMS"));
}

TEST(GraphTest, NearestResponderAlwaysCapableExhaustive) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-1000.0, 6000.0);
    for (int i = 0; i < 100; ++i) {
        const EscsGraph g = random_graph(rng);
        for (const Vertex& p : g.vertices()) {
            if (p.kind != VertexKind::Psap) continue;
            for (int k = 0; k < 20; ++k) {
                const GeoPoint at{coord(rng), coord(rng)};
                for (CallType t : kAllCallTypes) {
                    const VertexId r = nearest_responder(g, p.id, at, t);
                    ASSERT_TRUE(g.vertex(r).capabilities.contains(t));
                    // brute force: no capable responder strictly closer
                    for (const Vertex& other : g.vertices()) {
                        if (other.kind != VertexKind::Responder || !other.capabilities.contains(t)) continue;
                        EXPECT_GE(distance(other.location, at), distance(g.vertex(r).location, at));
                    }
                }
            }
        }
    }
}

TEST(GraphTest, LocateRegionCoversBoxExactlyOnce) {
    const EscsGraph g = synthesize_network({});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.0, 12000.0), uy(0.0, 24000.0);
    for (int i = 0; i < 10000; ++i) {
        const GeoPoint p{ux(rng), uy(rng)};
        const VertexId r = locate_region(g, p);
        int containing = 0;
        for (const Vertex& v : g.vertices()) {
            if (v.kind == VertexKind::CallerRegion && v.region->contains(p)) ++containing;
        }
        EXPECT_GE(containing, 1);
        EXPECT_TRUE(g.vertex(r).region->contains(p));
    }
    // shared boundary goes to the lowest id
    const GeoPoint corner{3000.0, 6000.0};
    VertexId lowest = -1;
    for (const Vertex& v : g.vertices()) {
        if (v.kind == VertexKind::CallerRegion && v.region->contains(corner)) {
            lowest = v.id;
            break;
        }
    }
    EXPECT_EQ(locate_region(g, corner), lowest);
    EXPECT_THROW(locate_region(g, {-1.0, 5.0}), Error);
}

TEST(SynthesizeTest, MetropolitanSpecGives56Vertices) {
    const EscsGraph g = synthesize_network({});
    EXPECT_EQ(g.size(), 56u);
    int psaps = 0, fire_ems = 0, law = 0, regions = 0;
    for (const Vertex& v : g.vertices()) {
        switch (v.kind) {
        case VertexKind::Psap:
            ++psaps;
            EXPECT_EQ(v.servers, 6);
            EXPECT_EQ(v.trunks, 16);
            break;
        case VertexKind::Responder:
            if (v.capabilities.contains(CallType::Fire)) {
                EXPECT_TRUE(v.capabilities.contains(CallType::Ems));
                ++fire_ems;
            } else {
                EXPECT_TRUE(v.capabilities.contains(CallType::Law));
                ++law;
            }
            EXPECT_TRUE(Rect({0, 0, 12000, 24000}).contains(v.location));
            break;
        case VertexKind::CallerRegion: ++regions; break;
        }
    }
    EXPECT_EQ(psaps, 1);
    EXPECT_EQ(fire_ems, 34);
    EXPECT_EQ(law, 5);
    EXPECT_EQ(regions, 16);
    // every PSAP-responder pair is connected both ways
    EXPECT_EQ(g.edges().size(), 16u + 2u * 39u);
}

TEST(SynthesizeTest, SameSeedSameBytes) {
    NetworkSpec spec;
    spec.seed = 42;
    EXPECT_EQ(to_graphml(synthesize_network(spec)), to_graphml(synthesize_network(spec)));
    NetworkSpec other = spec;
    other.seed = 43;
    EXPECT_NE(to_graphml(synthesize_network(spec)), to_graphml(synthesize_network(other)));
}

TEST(SynthesizeTest, SingleCellCoversBox) {
    NetworkSpec spec;
    spec.grid_rows = 1;
    spec.grid_cols = 1;
    const EscsGraph g = synthesize_network(spec);
    int regions = 0;
    for (const Vertex& v : g.vertices()) {
        if (v.kind != VertexKind::CallerRegion) continue;
        ++regions;
        EXPECT_EQ(*v.region, spec.bounds);
    }
    EXPECT_EQ(regions, 1);
}

TEST(SynthesizeTest, InvalidSpecsRejected) {
    NetworkSpec flat;
    flat.bounds = {0, 0, 0, 100};
    EXPECT_THROW(synthesize_network(flat), Error);
    NetworkSpec none;
    none.psaps = 0;
    EXPECT_THROW(synthesize_network(none), Error);
    NetworkSpec staff;
    staff.trunks = 5;
    EXPECT_THROW(synthesize_network(staff), Error);
}
