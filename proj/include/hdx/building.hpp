#pragma once

#include <array>
#include <map>
#include <optional>
#include <unordered_map>

#include "colored_complex.hpp"
#include "modules_flags.hpp"
#include "smith.hpp"

namespace hdx {

/**
 * Canonical (Howell-style) generating matrix for a full-support submodule of
 * O_N^3, N = R+2: lower-triangular, diagonal pi^{v_i} with unit-normalized
 * pivots, below-diagonal entries reduced modulo the pivot of their row.
 * Unique per submodule, which makes lattice classes hashable during BFS.
 *
 * Requires the module to contain pi^{N-1} O^3 (true for every lattice met
 * within a radius-R ball at precision N = R+2).
 */
inline std::array<relem, 9> howell_form(const LocalRing& O, std::vector<std::array<relem, 3>> gens) {
    const unsigned N = O.r();
    // seed with pi^{N-1} e_i (contained in every module we canonicalize)
    for (int i = 0; i < 3; ++i) {
        std::array<relem, 3> e{0, 0, 0};
        e[i] = O.pi_pow(N - 1);
        gens.push_back(e);
    }
    std::array<std::array<relem, 3>, 3> piv{}; // pivot column for each row
    for (int row = 0; row < 3; ++row) {
        // minimal valuation in this row
        unsigned best = N + 1;
        std::size_t bi = gens.size();
        for (std::size_t g = 0; g < gens.size(); ++g) {
            unsigned v = O.val(gens[g][row]);
            if (v < best) { best = v; bi = g; }
        }
        if (bi == gens.size()) throw std::runtime_error("howell_form: module not full-support");
        auto g = gens[bi];
        gens.erase(gens.begin() + bi);
        // normalize pivot to pi^v
        relem unit = O.shift_down(g[row], best);
        relem uinv = O.inv(unit);
        for (auto& x : g) x = O.mul(x, uinv);
        // eliminate the row from all other generators
        for (auto& h : gens) {
            if (h[row] == 0) continue;
            relem qout = O.shift_down(h[row], best);
            for (int i = 0; i < 3; ++i) h[i] = O.sub(h[i], O.mul(qout, g[i]));
        }
        // Howell closure: keep the part of <g> with zero in this row
        if (best > 0) {
            std::array<relem, 3> extra;
            relem s = O.pi_pow(N - best);
            for (int i = 0; i < 3; ++i) extra[i] = O.mul(s, g[i]);
            gens.push_back(extra);
        }
        piv[row] = g;
        // rows < `row` of g are already 0 (eliminated in earlier passes)
    }
    // reduce below-diagonal entries of pivot column i modulo the row pivot
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            unsigned vj = O.val(piv[j][j]);
            // subtract multiples of column j to reduce piv[i][j] mod pi^{vj}
            relem e = piv[i][j];
            relem rem = O.reduce(e, vj);
            relem qout = O.shift_down(O.sub(e, rem), vj);
            for (int t = 0; t < 3; ++t) piv[i][t] = O.sub(piv[i][t], O.mul(qout, piv[j][t]));
        }
    std::array<relem, 9> out{};
    for (int col = 0; col < 3; ++col)
        for (int row = 0; row < 3; ++row) out[row * 3 + col] = piv[col][row];
    return out;
}

/**
 * Radius-R ball in the Bruhat-Tits building B_3 around the standard lattice
 * class, at pi-precision N = R+2.  Vertices carry the canonical form, BFS
 * distance, color (log_q index mod 3), and sorted elementary divisors.
 */
struct LatticeBall {
    LocalRing O; // O at precision N = R+2
    unsigned R = 0;
    u64 q = 0;
    std::vector<std::array<relem, 9>> canon;
    std::vector<u32> dist;
    std::vector<uint8_t> color;
    std::vector<std::array<unsigned, 3>> divisors; // smith exponents, descending
    std::vector<std::vector<u32>> adj;
    std::vector<std::array<unsigned, 3>> stratum; // (a,b,c), filled by stratify_ball
    bool strata_computed = false;

    u32 n() const { return u32(canon.size()); }

    std::vector<u32> sphere(unsigned r) const {
        std::vector<u32> out;
        for (u32 v = 0; v < n(); ++v)
            if (dist[v] == r) out.push_back(v);
        return out;
    }
};

namespace detail {

struct CanonHash {
    std::size_t operator()(const std::array<relem, 9>& a) const {
        u64 h = 0x9e3779b97f4a7c15ULL;
        for (relem x : a) h = mix64(h ^ x);
        return h;
    }
};

/// Canonical residue-field subspace bases of F_q^3 (dims 1 and 2), expressed
/// as scalar-index coordinate vectors.
inline std::vector<std::vector<std::array<unsigned, 3>>> residue_subspace_bases(const LocalRing& O) {
    const unsigned q = unsigned(O.q());
    std::vector<std::vector<std::array<unsigned, 3>>> out;
    // dim 1: pivot patterns (1,b,c), (0,1,c), (0,0,1)
    for (unsigned b = 0; b < q; ++b)
        for (unsigned c = 0; c < q; ++c) out.push_back({{1, b, c}});
    for (unsigned c = 0; c < q; ++c) out.push_back({{0, 1, c}});
    out.push_back({{0, 0, 1}});
    // dim 2: kernels of canonical functionals phi, basis {e_j - phi_j e_k}
    auto add_kernel = [&](std::array<unsigned, 3> phi, int pivot) {
        std::vector<std::array<unsigned, 3>> basis;
        for (int j = 0; j < 3; ++j) {
            if (j == pivot) continue;
            std::array<unsigned, 3> v{0, 0, 0};
            v[j] = 1;
            v[pivot] = O.fq_neg(phi[j]);
            basis.push_back(v);
        }
        out.push_back(basis);
    };
    for (unsigned b = 0; b < q; ++b)
        for (unsigned c = 0; c < q; ++c) add_kernel({1, b, c}, 0);
    for (unsigned c = 0; c < q; ++c) add_kernel({0, 1, c}, 1);
    add_kernel({0, 0, 1}, 2);
    return out;
}

} // namespace detail

/// Builds the radius-R ball of B_3 over Q_p (kind padic) or F_q((t))
/// (kind laurent, q = p^e).  Throws on budget overflow.
inline LatticeBall build_ball(RingKind kind, u64 p, unsigned e, unsigned R, u64 max_vertices = 2000000) {
    const unsigned N = R + 2;
    LocalRing O = (kind == RingKind::padic) ? LocalRing::zmod(p, N) : LocalRing::laurent_ring(p, e, N);
    LatticeBall B{O, R, O.q(), {}, {}, {}, {}, {}, {}, false};

    // estimated ball size ~ sum of sphere sizes; refuse absurd requests early
    {
        double est = 1;
        for (unsigned r = 1; r <= R; ++r) est += double(r + 1) * std::pow(double(O.q()), 2.0 * r);
        if (est > double(max_vertices)) throw std::overflow_error("build_ball: size estimate exceeds budget");
    }

    std::unordered_map<std::array<relem, 9>, u32, detail::CanonHash> index;
    auto subspaces = detail::residue_subspace_bases(O);

    auto vertex_of = [&](const std::array<relem, 9>& c) -> std::optional<u32> {
        auto it = index.find(c);
        if (it == index.end()) return std::nullopt;
        return it->second;
    };

    auto add_vertex = [&](const std::array<relem, 9>& c, u32 d) {
        u32 id = u32(B.canon.size());
        index.emplace(c, id);
        B.canon.push_back(c);
        B.dist.push_back(d);
        // color and divisors from the canonical matrix
        RingMat M(3, 3);
        for (int i = 0; i < 9; ++i) M.a[i] = c[i];
        auto sm = smith_form(O, M);
        unsigned sum = 0;
        std::array<unsigned, 3> dv{};
        for (int i = 0; i < 3; ++i) { dv[i] = sm.exponents[i]; sum += sm.exponents[i]; }
        B.divisors.push_back(dv);
        B.color.push_back(uint8_t(sum % 3));
        B.adj.emplace_back();
        return id;
    };

    {
        std::vector<std::array<relem, 3>> unit_basis = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        add_vertex(howell_form(O, unit_basis), 0);
    }

    // all neighbor classes of v, as canonical forms
    auto neighbor_forms = [&](u32 v) {
        std::vector<std::array<relem, 9>> out;
        const auto& C = B.canon[v];
        std::array<std::array<relem, 3>, 3> basis;
        for (int col = 0; col < 3; ++col)
            for (int row = 0; row < 3; ++row) basis[col][row] = C[row * 3 + col];
        const relem pi = O.uniformizer();
        for (auto& sub : subspaces) {
            // M = pi L + lift(subspace of L/pi L)
            std::vector<std::array<relem, 3>> gens;
            for (int col = 0; col < 3; ++col) {
                std::array<relem, 3> g;
                for (int row = 0; row < 3; ++row) g[row] = O.mul(pi, basis[col][row]);
                gens.push_back(g);
            }
            for (auto& svec : sub) {
                std::array<relem, 3> g{0, 0, 0};
                for (int col = 0; col < 3; ++col) {
                    relem cscal = O.scalar(svec[col]);
                    if (cscal == 0) continue;
                    for (int row = 0; row < 3; ++row)
                        g[row] = O.add(g[row], O.mul(cscal, basis[col][row]));
                }
                gens.push_back(g);
            }
            auto H = howell_form(O, gens);
            // primitive rescale: at most one division by pi
            bool all_div = true;
            for (relem x : H)
                if (x != 0 && O.val(x) == 0) { all_div = false; break; }
            if (all_div) {
                std::vector<std::array<relem, 3>> g2;
                for (int col = 0; col < 3; ++col) {
                    std::array<relem, 3> g;
                    for (int row = 0; row < 3; ++row) g[row] = O.shift_down(H[row * 3 + col], 1);
                    g2.push_back(g);
                }
                H = howell_form(O, g2);
            }
            out.push_back(H);
        }
        return out;
    };

    std::vector<u32> frontier{0};
    for (unsigned depth = 0; depth < R; ++depth) {
        std::vector<u32> next;
        for (u32 v : frontier) {
            for (auto& H : neighbor_forms(v)) {
                auto existing = vertex_of(H);
                u32 w;
                if (existing) {
                    w = *existing;
                } else {
                    if (B.canon.size() >= max_vertices) throw std::overflow_error("build_ball: vertex budget exceeded");
                    w = add_vertex(H, depth + 1);
                    next.push_back(w);
                }
                if (w != v) B.adj[v].push_back(w);
            }
        }
        frontier = std::move(next);
    }
    // edges inside the outermost sphere: expand the final frontier but keep
    // only neighbors that already exist
    for (u32 v : frontier)
        for (auto& H : neighbor_forms(v)) {
            auto existing = vertex_of(H);
            if (existing && *existing != v) B.adj[v].push_back(*existing);
        }
    // dedupe adjacency and symmetrize
    {
        std::vector<std::set<u32>> sets(B.n());
        for (u32 v = 0; v < B.n(); ++v)
            for (u32 w : B.adj[v]) {
                sets[v].insert(w);
                sets[w].insert(v);
            }
        for (u32 v = 0; v < B.n(); ++v) B.adj[v].assign(sets[v].begin(), sets[v].end());
    }
    return B;
}

/// Directed color-1 edges and triangle list of the ball, as a ColoredComplex.
/// Triangles are pairwise-adjacent triples (the building is a clique complex).
inline ColoredComplex ball_complex(const LatticeBall& B) {
    std::vector<std::pair<u32, u32>> c1;
    for (u32 v = 0; v < B.n(); ++v)
        for (u32 w : B.adj[v]) {
            unsigned shift = (3 + B.color[w] - B.color[v]) % 3;
            if (shift == 1) c1.emplace_back(v, w);
            else if (shift != 2) throw std::runtime_error("ball_complex: invalid edge color");
        }
    std::vector<std::array<u32, 3>> tris;
    for (u32 v = 0; v < B.n(); ++v)
        for (u32 w : B.adj[v]) {
            if (w < v) continue;
            // common neighbors u > w keep each triangle once
            for (u32 u : B.adj[w]) {
                if (u <= w || u <= v) continue;
                if (std::binary_search(B.adj[v].begin(), B.adj[v].end(), u)) tris.push_back({v, w, u});
            }
        }
    return ColoredComplex::build(B.n(), c1, tris, /*validate=*/true);
}

/**
 * Iwahori-orbit stratification: each vertex lands in X_{a,b,c} = B t v_0 for
 * a unique ordered tuple with min(a,b,c) = 0.  Orbits are computed by closing
 * the ball's vertex set under a generating set of the Iwahori subgroup at
 * precision N; each orbit is labeled by its unique diagonal-lattice member
 * (the label existing and being unique doubles as a self-check of the
 * generator closure).
 */
inline void stratify_ball(LatticeBall& B) {
    if (B.strata_computed) return;
    const LocalRing& O = B.O;
    const unsigned N = O.r();
    const unsigned q = unsigned(O.q());

    // generating set of the Iwahori subgroup mod pi^N
    std::vector<std::array<relem, 9>> gens;
    auto mat = [&](int i, int j, relem c) {
        std::array<relem, 9> m{};
        m[0] = m[4] = m[8] = 1;
        m[i * 3 + j] = c;
        return m;
    };
    // upper elementaries over monomial spans, lower with an extra pi
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            unsigned k0 = (i < j) ? 0 : 1;
            for (unsigned k = k0; k < N; ++k)
                for (unsigned s = 1; s < q; ++s)
                    gens.push_back(mat(i, j, O.mul(O.pi_pow(k), O.scalar(s))));
        }
    // torus: primitive residue element and the 1 + pi^k u filtration
    std::vector<relem> unit_gens;
    {
        // primitive element of F_q^x
        unsigned prim = 1;
        for (unsigned s = 2; s < q; ++s) {
            unsigned ordr = 1, x = s;
            while (x != 1) { x = O.fq_mul(x, s); ++ordr; }
            if (ordr == q - 1) { prim = s; break; }
        }
        if (q > 2) unit_gens.push_back(O.scalar(prim));
        for (unsigned k = 1; k < N; ++k)
            for (unsigned s = 1; s < q; ++s)
                unit_gens.push_back(O.add(O.one(), O.mul(O.pi_pow(k), O.scalar(s))));
    }
    for (int pos = 0; pos < 3; ++pos)
        for (relem u : unit_gens) {
            std::array<relem, 9> m{};
            m[0] = m[4] = m[8] = 1;
            m[pos * 3 + pos] = u;
            gens.push_back(m);
        }

    std::unordered_map<std::array<relem, 9>, u32, detail::CanonHash> index;
    for (u32 v = 0; v < B.n(); ++v) index.emplace(B.canon[v], v);

    auto apply = [&](const std::array<relem, 9>& g, u32 v) -> u32 {
        // columns of canon[v] are a basis; act by left multiplication
        std::vector<std::array<relem, 3>> cols(3);
        for (int col = 0; col < 3; ++col)
            for (int row = 0; row < 3; ++row) {
                relem s = 0;
                for (int k = 0; k < 3; ++k)
                    s = O.add(s, O.mul(g[row * 3 + k], B.canon[v][k * 3 + col]));
                cols[col][row] = s;
            }
        auto H = howell_form(O, cols);
        auto it = index.find(H);
        if (it == index.end()) throw std::runtime_error("stratify_ball: orbit left the ball");
        return it->second;
    };

    // union-find over vertices
    std::vector<u32> parent(B.n());
    for (u32 v = 0; v < B.n(); ++v) parent[v] = v;
    std::function<u32(u32)> find = [&](u32 x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    };
    auto unite = [&](u32 a, u32 b) {
        a = find(a); b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (u32 v = 0; v < B.n(); ++v)
        for (auto& g : gens) unite(v, apply(g, v));

    // label orbits by their diagonal representative diag(pi^a, pi^b, pi^c)
    std::map<u32, std::array<unsigned, 3>> label;
    for (unsigned a = 0; a <= B.R; ++a)
        for (unsigned b = 0; b <= B.R; ++b)
            for (unsigned c = 0; c <= B.R; ++c) {
                if (std::min({a, b, c}) != 0 || std::max({a, b, c}) > B.R) continue;
                std::array<relem, 9> D{};
                D[0] = O.pi_pow(a); D[4] = O.pi_pow(b); D[8] = O.pi_pow(c);
                auto it = index.find(D);
                if (it == index.end()) throw std::runtime_error("stratify_ball: diagonal vertex missing");
                u32 root = find(it->second);
                if (label.count(root)) throw std::runtime_error("stratify_ball: two diagonal lattices in one orbit");
                label[root] = {a, b, c};
            }
    B.stratum.assign(B.n(), {0, 0, 0});
    for (u32 v = 0; v < B.n(); ++v) {
        auto it = label.find(find(v));
        if (it == label.end()) throw std::runtime_error("stratify_ball: orbit without diagonal representative");
        B.stratum[v] = it->second;
    }
    B.strata_computed = true;
}

/// |X_{a,b,c}| by the Weyl-length case table.
inline u64 stratum_size_formula(u64 q, unsigned a, unsigned b, unsigned c) {
    unsigned mx = std::max({a, b, c});
    if (mx == 0) return 1;
    unsigned drop;
    if (a >= b && b >= c) drop = 0;
    else if ((a >= c && c > b) || (b > a && a >= c)) drop = 1;
    else if ((b >= c && c > a) || (c > a && a >= b)) drop = 2;
    else drop = 3; // c > b > a
    return ipow(q, 2 * mx - drop);
}

/// |S_r| = q^(2r-3)(qr+q+r-1)(q^2+q+1) for r >= 2; 2(q^2+q+1) at r = 1.
inline u64 sphere_size_formula(u64 q, unsigned r) {
    if (r == 0) return 1;
    if (r == 1) return 2 * (q * q + q + 1);
    return ipow(q, 2 * r - 3) * (q * r + q + r - 1) * (q * q + q + 1);
}

} // namespace hdx
