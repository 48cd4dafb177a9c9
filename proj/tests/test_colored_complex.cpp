#include <catch_amalgamated.hpp>

#include "hdx/building.hpp"
#include "hdx/colored_complex.hpp"

using namespace hdx;

// a single triangle with cyclic color-1 orientation 0->1->2->0
static ColoredComplex one_triangle() {
    return ColoredComplex::build(3, {{0, 1}, {1, 2}, {2, 0}}, {{{0, 1, 2}}});
}

TEST_CASE("coloring validation accepts cyclic triangles, rejects bad ones") {
    CHECK_NOTHROW(one_triangle());
    // both directions color 1 on one edge
    CHECK_THROWS(ColoredComplex::build(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}}, {{{0, 1, 2}}}));
    // triangle with no cyclic orientation: 0->1, 2->1, 2->0
    CHECK_THROWS(ColoredComplex::build(3, {{0, 1}, {2, 1}, {2, 0}}, {{{0, 1, 2}}}));
}

TEST_CASE("links: vertex link of a single triangle is one edge; edge link is the apex") {
    auto X = one_triangle();
    auto L = X.link_of_vertex(0);
    REQUIRE(L.vertices.size() == 2);
    REQUIRE(L.adj[0].size() == 1);
    auto apex = X.link_of_edge(0, 1);
    REQUIRE(apex == std::vector<u32>{2});
    // audit flags the 2-vertex link as degenerate
    auto e = audit_link(L, 0);
    CHECK(e.degenerate);
}

TEST_CASE("geodesics on a triangle: paths closing a triangle are rejected") {
    auto X = one_triangle();
    auto g1 = X.geodesics_from(0, 1);
    REQUIRE(g1.size() == 1); // 0 -> 1
    auto g2 = X.geodesics_from(0, 2);
    CHECK(g2.empty()); // 0 -> 1 -> 2 closes the triangle
}

TEST_CASE("ball complex: geodesic counts from the center match (q^2+q+1) q^(2(r-1))") {
    auto B = build_ball(RingKind::padic, 2, 1, 2);
    auto X = ball_complex(B);
    CHECK(X.geodesics_from(0, 1).size() == 7);
    CHECK(X.geodesics_from(0, 2).size() == 28);
    CHECK(X.geodesics_from_color2(0, 2).size() == 28);
    // non-geodesic 2-paths: each first step has exactly q+1 = 3 triangle closers
    u64 all_2paths = 0;
    for (u32 w : X.out1(0)) all_2paths += X.out1(w).size();
    CHECK(all_2paths == 49);
}

TEST_CASE("inverted color-1 geodesics into v coincide with color-2 geodesics from v") {
    auto B = build_ball(RingKind::padic, 2, 1, 2);
    auto X = ball_complex(B);
    // collect color-1 2-geodesics ending at the center from every start
    std::set<std::vector<u32>> into_center;
    for (u32 v = 0; v < X.n_vertices(); ++v)
        for (auto& g : X.geodesics_from(v, 2))
            if (g.back() == 0) into_center.insert({g[2], g[1], g[0]});
    std::set<std::vector<u32>> color2;
    for (auto& g : X.geodesics_from_color2(0, 2)) color2.insert(g);
    REQUIRE(into_center == color2);
}

TEST_CASE("geodesic uniqueness on building balls (p=2, r <= 3)") {
    auto B = build_ball(RingKind::padic, 2, 1, 4);
    auto X = ball_complex(B);
    for (unsigned r = 1; r <= 3; ++r) {
        for (u32 v = 0; v < X.n_vertices(); ++v) {
            if (B.dist[v] + r > B.R) continue;
            std::map<u32, int> ends;
            for (auto& g : X.geodesics_from(v, r)) ++ends[g.back()];
            for (auto& [w, cnt] : ends) REQUIRE(cnt == 1);
            REQUIRE(ends.size() == lines_count_formula(2, r));
        }
    }
}

TEST_CASE("geodesic power r=1 of a clique complex reproduces its interior structure") {
    auto B = build_ball(RingKind::padic, 2, 1, 2);
    auto X = ball_complex(B);
    auto P = geodesic_power(X, 1);
    REQUIRE(P.colored);
    // every color-1 edge is a power edge with multiplicity 1
    u64 count_edges = 0;
    for (u32 v = 0; v < X.n_vertices(); ++v) count_edges += X.out1(v).size();
    REQUIRE(P.edges.size() == count_edges);
    for (u32 m : P.edge_multiplicity) REQUIRE(m == 1);
    // triangles of the power complex == triangles of X (as sets)
    std::set<std::array<u32, 3>> t1, t2;
    auto canon = [](std::array<u32, 3> t) {
        std::sort(t.begin(), t.end());
        return t;
    };
    for (auto& t : X.triangles()) t1.insert(canon(t));
    for (auto& t : P.triangles) t2.insert(canon(t));
    REQUIRE(t1 == t2);
}

TEST_CASE("power complex at r=2: center link vs free projective plane counts") {
    auto B = build_ball(RingKind::padic, 2, 1, 4);
    auto X = ball_complex(B);
    // 2-geodesics from / into the center
    auto out_g = X.geodesics_from(0, 2);
    auto in_g = X.geodesics_from_color2(0, 2);
    REQUIRE(out_g.size() == 28);
    REQUIRE(in_g.size() == 28);
    std::set<u32> outs, ins;
    for (auto& g : out_g) outs.insert(g.back());
    for (auto& g : in_g) ins.insert(g.back());
    REQUIRE(outs.size() == 28); // collision-free
    REQUIRE(ins.size() == 28);
    // disjoint (different Cartan positions)
    for (u32 v : outs) REQUIRE(ins.count(v) == 0);
    // triangles through the center: 28 * 6 directed pairs
    u64 tri = 0;
    for (u32 v1 : outs) {
        for (auto& g : X.geodesics_from(v1, 2))
            if (ins.count(g.back())) ++tri;
    }
    REQUIRE(tri == 28 * 6);
}

TEST_CASE("vertex with no outgoing geodesics is isolated in the power complex") {
    // path graph 0 ->1 colored 1, no triangles: geodesics exist, but from the
    // end vertex 1 there is no outgoing color-1 edge
    auto X = ColoredComplex::build(2, {{0, 1}}, {}, false);
    auto P = geodesic_power(X, 1);
    bool from1 = false;
    for (auto [a, b] : P.edges)
        if (a == 1) from1 = true;
    CHECK_FALSE(from1);
}

TEST_CASE("hdx audit: center link of a building ball is the flag graph of P^2(F_q)") {
    auto B = build_ball(RingKind::padic, 2, 1, 2);
    auto X = ball_complex(B);
    auto L = X.link_of_vertex(0);
    REQUIRE(L.vertices.size() == 14);
    auto e = audit_link(L, 0);
    CHECK_FALSE(e.disconnected);
    CHECK(std::abs(e.mu - std::sqrt(2.0) / 3.0) < 1e-10);

    auto B3 = build_ball(RingKind::padic, 3, 1, 2);
    auto X3 = ball_complex(B3);
    auto e3 = audit_link(X3.link_of_vertex(0), 0);
    CHECK(std::abs(e3.mu - std::sqrt(3.0) / 4.0) < 1e-10);
}

TEST_CASE("hdx audit report: interior of a radius-3 ball passes at sqrt(q)/(q+1)") {
    auto B = build_ball(RingKind::padic, 2, 1, 3);
    auto X = ball_complex(B);
    // audit only interior vertices (boundary links are cut open)
    double maxmu = -1;
    u64 audited = 0;
    for (u32 v = 0; v < X.n_vertices(); ++v) {
        if (B.dist[v] >= B.R) continue;
        auto e = audit_link(X.link_of_vertex(v), v);
        REQUIRE_FALSE(e.disconnected);
        maxmu = std::max(maxmu, e.mu);
        ++audited;
    }
    REQUIRE(audited > 100);
    CHECK(std::abs(maxmu - std::sqrt(2.0) / 3.0) < 1e-9);
    // the full-audit entry point flags boundary links but runs to completion
    auto rep = hdx_audit(X, 0.5, 50);
    CHECK(rep.cells_audited > 0);
}
