#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "eigensolve.hpp"

namespace hdx {

/**
 * A 3-colored pure 2-dimensional simplicial complex: triangles plus a color
 * map on directed edges with values in {1,2}, col(w->v) = 3 - col(v->w).
 * Storing the color-1 out-adjacency determines the whole map.  Every
 * triangle must admit a cyclic color-1 orientation (checked on build).
 *
 * Immutable after construction; all queries are const.
 */
class ColoredComplex {
public:
    static constexpr unsigned kMaxVertexBits = 21;

    ColoredComplex() = default;

    /// Builds from directed color-1 edges and the triangle list.
    static ColoredComplex build(u32 n, const std::vector<std::pair<u32, u32>>& color1_edges,
                                const std::vector<std::array<u32, 3>>& triangles, bool validate = true) {
        ColoredComplex X;
        X.n_ = n;
        if (n >= (u32(1) << kMaxVertexBits)) throw std::overflow_error("ColoredComplex: too many vertices");
        X.out1_.assign(n, {});
        X.in1_.assign(n, {});
        for (auto [a, b] : color1_edges) {
            X.out1_[a].push_back(b);
            X.in1_[b].push_back(a);
        }
        for (auto& v : X.out1_) std::sort(v.begin(), v.end());
        for (auto& v : X.in1_) std::sort(v.begin(), v.end());
        X.triangles_ = triangles;
        for (auto& t : X.triangles_) {
            std::array<u32, 3> s = t;
            std::sort(s.begin(), s.end());
            X.tri_set_.insert(pack3(s[0], s[1], s[2]));
        }
        if (validate) X.validate_coloring();
        return X;
    }

    u32 n_vertices() const { return n_; }
    const std::vector<std::array<u32, 3>>& triangles() const { return triangles_; }
    const std::vector<u32>& out1(u32 v) const { return out1_[v]; }
    const std::vector<u32>& in1(u32 v) const { return in1_[v]; }

    bool has_edge_color1(u32 a, u32 b) const {
        return std::binary_search(out1_[a].begin(), out1_[a].end(), b);
    }

    bool adjacent(u32 a, u32 b) const { return has_edge_color1(a, b) || has_edge_color1(b, a); }

    /// col(a->b): 1, 2, or 0 when not an edge.
    unsigned edge_color(u32 a, u32 b) const {
        if (has_edge_color1(a, b)) return 1;
        if (has_edge_color1(b, a)) return 2;
        return 0;
    }

    bool is_triangle(u32 a, u32 b, u32 c) const {
        std::array<u32, 3> s{a, b, c};
        std::sort(s.begin(), s.end());
        return tri_set_.count(pack3(s[0], s[1], s[2])) > 0;
    }

    /// Undirected neighbor list (color 1 and color 2 together).
    std::vector<u32> neighbors(u32 v) const {
        std::vector<u32> out(out1_[v]);
        out.insert(out.end(), in1_[v].begin(), in1_[v].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Purity: every vertex and edge lies in a triangle.
    bool is_pure() const {
        std::vector<char> vseen(n_, 0);
        std::unordered_set<u64> eseen;
        for (auto& t : triangles_) {
            for (u32 v : t) vseen[v] = 1;
            std::array<u32, 3> s = t;
            std::sort(s.begin(), s.end());
            eseen.insert(pack3(s[0], s[1], 0));
            eseen.insert(pack3(s[0], s[2], 0));
            eseen.insert(pack3(s[1], s[2], 0));
        }
        for (u32 v = 0; v < n_; ++v)
            if (!vseen[v] && !(out1_[v].empty() && in1_[v].empty())) return false;
        for (u32 v = 0; v < n_; ++v)
            for (u32 w : out1_[v]) {
                u32 a = std::min(v, w), b = std::max(v, w);
                if (!eseen.count(pack3(a, b, 0))) return false;
            }
        return true;
    }

    // ----- links -----

    struct LinkGraph {
        std::vector<u32> vertices;            // original vertex ids
        std::vector<std::vector<u32>> adj;    // local indices
    };

    /// Link of a vertex: neighbors, with an edge for each triangle through v.
    LinkGraph link_of_vertex(u32 v) const {
        LinkGraph L;
        std::unordered_map<u32, u32> idx;
        auto local = [&](u32 w) {
            auto it = idx.find(w);
            if (it != idx.end()) return it->second;
            u32 i = u32(L.vertices.size());
            idx.emplace(w, i);
            L.vertices.push_back(w);
            L.adj.emplace_back();
            return i;
        };
        for (u32 w : neighbors(v)) local(w);
        for (auto& t : triangles_) {
            int pos = -1;
            for (int i = 0; i < 3; ++i)
                if (t[i] == v) pos = i;
            if (pos < 0) continue;
            u32 a = t[(pos + 1) % 3], b = t[(pos + 2) % 3];
            u32 ia = local(a), ib = local(b);
            L.adj[ia].push_back(ib);
            L.adj[ib].push_back(ia);
        }
        return L;
    }

    /// Link of an edge: the apex vertices of triangles through it.
    std::vector<u32> link_of_edge(u32 a, u32 b) const {
        std::vector<u32> out;
        for (auto& t : triangles_) {
            bool ha = t[0] == a || t[1] == a || t[2] == a;
            bool hb = t[0] == b || t[1] == b || t[2] == b;
            if (ha && hb)
                for (u32 v : t)
                    if (v != a && v != b) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // ----- geodesics -----

    /// All color-1 r-geodesics starting at v (vertex sequences of length r+1).
    std::vector<std::vector<u32>> geodesics_from(u32 v, unsigned r) const {
        std::vector<std::vector<u32>> out;
        std::vector<u32> path{v};
        geodesic_dfs(path, r, /*color2=*/false, out);
        return out;
    }

    /// All color-2 r-geodesics from v; their reversals are the color-1
    /// geodesics ending at v.
    std::vector<std::vector<u32>> geodesics_from_color2(u32 v, unsigned r) const {
        std::vector<std::vector<u32>> out;
        std::vector<u32> path{v};
        geodesic_dfs(path, r, /*color2=*/true, out);
        return out;
    }

    /// Continuation counts: w extends the color-1 step (u -> v) geodesically
    /// iff v->w has color 1, w != u, and {u,v,w} is not a triangle.
    bool geodesic_step_ok(u32 u, u32 v, u32 w) const {
        return w != u && !is_triangle(u, v, w);
    }

    void validate_coloring() const {
        // every triangle admits a cyclic color-1 orientation, and no edge has
        // both directions colored 1
        for (u32 v = 0; v < n_; ++v)
            for (u32 w : out1_[v])
                if (has_edge_color1(w, v)) throw std::runtime_error("ColoredComplex: edge colored 1 both ways");
        for (auto& t : triangles_) {
            bool ok = false;
            const std::array<std::array<int, 3>, 2> rots = {{{0, 1, 2}, {0, 2, 1}}};
            for (auto& rt : rots) {
                if (has_edge_color1(t[rt[0]], t[rt[1]]) && has_edge_color1(t[rt[1]], t[rt[2]]) &&
                    has_edge_color1(t[rt[2]], t[rt[0]]))
                    ok = true;
            }
            if (!ok) throw std::runtime_error("ColoredComplex: triangle without cyclic color-1 orientation");
        }
    }

    static u64 pack3(u32 a, u32 b, u32 c) {
        return (u64(a) << (2 * kMaxVertexBits)) | (u64(b) << kMaxVertexBits) | u64(c);
    }

private:
    void geodesic_dfs(std::vector<u32>& path, unsigned remaining, bool color2,
                      std::vector<std::vector<u32>>& out) const {
        if (remaining == 0) {
            out.push_back(path);
            return;
        }
        u32 last = path.back();
        const auto& next = color2 ? in1_[last] : out1_[last];
        for (u32 w : next) {
            if (path.size() >= 2) {
                u32 prev = path[path.size() - 2];
                if (w == prev || is_triangle(prev, last, w)) continue;
            }
            path.push_back(w);
            geodesic_dfs(path, remaining - 1, color2, out);
            path.pop_back();
        }
    }

    u32 n_ = 0;
    std::vector<std::vector<u32>> out1_, in1_;
    std::vector<std::array<u32, 3>> triangles_;
    std::unordered_set<u64> tri_set_;
};

/**
 * The geodesic r-power of a colored complex: same vertices; triangles are the
 * cyclic triples joined by color-1 r-geodesics.  Power edges keep the
 * direction of their defining geodesic and a multiplicity attribute (several
 * geodesics may join the same endpoint pair on quotients with short
 * systoles).  Triangles are stored rotated so the least vertex id is first.
 */
struct PowerComplex {
    u32 n = 0;
    unsigned r = 0;
    bool colored = false; // true iff 3 does not divide r
    std::vector<std::pair<u32, u32>> edges; // directed (geodesic start -> end)
    std::vector<u32> edge_multiplicity;
    std::vector<std::array<u32, 3>> triangles; // cyclic order (v0 -> v1 -> v2 -> v0), least id first

    /// Reinterpret as a 3-colored complex (requires colored == true).
    ColoredComplex as_colored_complex() const {
        if (!colored) throw std::logic_error("PowerComplex: 3 | r, not colorable");
        std::vector<std::pair<u32, u32>> c1;
        c1.reserve(edges.size());
        for (auto [a, b] : edges) {
            if (r % 3 == 1) c1.emplace_back(a, b);
            else c1.emplace_back(b, a); // color 2 forward means color 1 backward
        }
        return ColoredComplex::build(n, c1, triangles, /*validate=*/true);
    }
};

inline PowerComplex geodesic_power(const ColoredComplex& X, unsigned r) {
    PowerComplex P;
    P.n = X.n_vertices();
    P.r = r;
    P.colored = (r % 3) != 0;
    std::map<std::pair<u32, u32>, u32> mult;
    for (u32 v = 0; v < X.n_vertices(); ++v)
        for (auto& g : X.geodesics_from(v, r)) ++mult[{v, g.back()}];
    std::vector<std::vector<u32>> pout(P.n);
    for (auto& [e, m] : mult) {
        P.edges.push_back(e);
        P.edge_multiplicity.push_back(m);
        pout[e.first].push_back(e.second);
    }
    for (auto& v : pout) std::sort(v.begin(), v.end());
    // triangles: directed 3-cycles in the power-edge digraph, deduped by
    // rotating the least vertex to the front
    std::set<std::array<u32, 3>> tris;
    for (u32 a = 0; a < P.n; ++a)
        for (u32 b : pout[a]) {
            if (b == a) continue;
            for (u32 c : pout[b]) {
                if (c == a || c == b) continue;
                if (!std::binary_search(pout[c].begin(), pout[c].end(), a)) continue;
                std::array<u32, 3> t{a, b, c};
                int least = int(std::min_element(t.begin(), t.end()) - t.begin());
                std::array<u32, 3> rot{t[least], t[(least + 1) % 3], t[(least + 2) % 3]};
                tris.insert(rot);
            }
        }
    P.triangles.assign(tris.begin(), tris.end());
    return P;
}

// ---------------------------------------------------------------------------
// HDX audit
// ---------------------------------------------------------------------------

struct HdxAuditEntry {
    u32 cell = 0;        // vertex id (codim-2 cell of a 2-dim complex)
    double mu = 0;       // second-largest normalized adjacency eigenvalue
    bool disconnected = false;
    bool degenerate = false; // link with < 3 vertices
};

struct HdxAuditReport {
    double max_mu = -1;
    bool pass = false;
    double lambda = 0;
    double global_bound = -1; // lambda/(1 - lambda d) when max_mu < 1/d
    std::vector<HdxAuditEntry> entries;
    u64 cells_audited = 0;
};

/// mu of a link graph: second-largest eigenvalue of D^{-1/2} A D^{-1/2};
/// disconnected links report mu = 1.
inline HdxAuditEntry audit_link(const ColoredComplex::LinkGraph& L, u32 cell) {
    HdxAuditEntry e;
    e.cell = cell;
    std::size_t n = L.vertices.size();
    if (n < 3) {
        e.degenerate = true;
        e.mu = n == 2 ? 1.0 : 0.0;
        e.disconnected = false;
        return e;
    }
    auto eigs = normalized_adjacency_eigenvalues(L.adj);
    e.mu = eigs[n - 2];
    e.disconnected = e.mu > 1.0 - 1e-9;
    return e;
}

/// Audits the links of every codim-2 cell (vertices, for a pure 2-complex)
/// against the target bound lambda.  `sample_stride` > 1 audits a subset
/// (vertex-transitive complexes need only one representative).
inline HdxAuditReport hdx_audit(const ColoredComplex& X, double lambda, u32 sample_stride = 1) {
    HdxAuditReport rep;
    rep.lambda = lambda;
    for (u32 v = 0; v < X.n_vertices(); v += sample_stride) {
        auto L = X.link_of_vertex(v);
        if (L.vertices.empty()) continue;
        auto e = audit_link(L, v);
        rep.max_mu = std::max(rep.max_mu, e.mu);
        rep.entries.push_back(e);
        ++rep.cells_audited;
    }
    rep.pass = rep.max_mu <= lambda;
    const double d = 2.0;
    if (rep.max_mu < 1.0 / d) rep.global_bound = rep.max_mu / (1.0 - rep.max_mu * d);
    return rep;
}

} // namespace hdx
