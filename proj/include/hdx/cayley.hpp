#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "gaussian.hpp"

namespace hdx {

/**
 * The generator set S_p of matrices s in M_3(Z[i]) with s* s = pI,
 * ord_pi(det s) = 1, and diagonal entries congruent to 1 mod (2+2i)
 * (off-diagonal entries unconstrained).  p = pi * conj(pi) with the
 * tie-break pi = a+bi, a odd, b even, a,b > 0.
 */
struct CayleySp {
    u64 p = 0;
    Gint pi{};
    std::vector<Gmat> mats;                 // deterministic (sorted) order
    std::vector<Gmat> canon;                // projective canonical forms
    std::vector<std::vector<u32>> sigma;    // per s: the p^2 non-closing continuations
    std::vector<std::vector<u32>> closers;  // per s: the p+1 triangle-closing continuations
};

namespace detail {

inline Gint find_pi(u64 p) {
    // p = a^2 + b^2 with a odd, b even, both positive
    for (i64 a = 1; u64(a * a) <= p; a += 2)
        for (i64 b = 2; u64(a * a + b * b) <= p; b += 2)
            if (u64(a * a + b * b) == p) return Gint{a, b};
    throw std::invalid_argument("find_pi: p is not a sum of an odd and an even square");
}

inline bool diag_cong_1(Gint z) {
    return gint_divisible(z - Gint{1, 0}, Gint{2, 2});
}

} // namespace detail

inline CayleySp enumerate_sp(u64 p) {
    if (p % 4 != 1 || !is_prime_u64(p)) throw std::invalid_argument("enumerate_sp: p must be a prime = 1 mod 4");
    CayleySp S;
    S.p = p;
    S.pi = detail::find_pi(p);

    // vectors of norm p, bucketed by which coordinate must carry the
    // diagonal congruence
    std::vector<std::array<Gint, 3>> v1, v2, v3;
    i64 m = 0;
    while (u64(m * m) <= p) ++m;
    std::vector<Gint> units;
    for (i64 a = -m; a <= m; ++a)
        for (i64 b = -m; b <= m; ++b)
            if (u64(a * a + b * b) <= p) units.push_back(Gint{a, b});
    for (auto& x : units)
        for (auto& y : units) {
            u64 n2 = x.norm() + y.norm();
            if (n2 > p) continue;
            for (auto& z : units) {
                if (x.norm() + y.norm() + z.norm() != p) continue;
                std::array<Gint, 3> v{x, y, z};
                if (detail::diag_cong_1(v[0])) v1.push_back(v);
                if (detail::diag_cong_1(v[1])) v2.push_back(v);
                if (detail::diag_cong_1(v[2])) v3.push_back(v);
            }
        }

    auto herm = [](const std::array<Gint, 3>& a, const std::array<Gint, 3>& b) {
        return a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2];
    };
    for (auto& c1 : v1)
        for (auto& c2 : v2) {
            if (!herm(c1, c2).is_zero()) continue;
            for (auto& c3 : v3) {
                if (!herm(c1, c3).is_zero() || !herm(c2, c3).is_zero()) continue;
                Gmat s{};
                for (int row = 0; row < 3; ++row) {
                    s[row * 3 + 0] = c1[row];
                    s[row * 3 + 1] = c2[row];
                    s[row * 3 + 2] = c3[row];
                }
                if (gint_ord(gmat_det(s), S.pi) != 1) continue;
                S.mats.push_back(s);
            }
        }
    std::sort(S.mats.begin(), S.mats.end());
    S.canon.reserve(S.mats.size());
    for (auto& s : S.mats) S.canon.push_back(gmat_projective_canonical(s));
    return S;
}

/// Fills sigma / closers: s' closes a triangle after s iff s s' s'' is scalar
/// for some s'' in S_p; the candidate s'' is proportional to (s s')*.
inline void build_sigma_tables(CayleySp& S) {
    const u32 n = u32(S.mats.size());
    std::unordered_map<Gmat, u32, GmatHash> canon_index;
    for (u32 i = 0; i < n; ++i) canon_index.emplace(S.canon[i], i);
    S.sigma.assign(n, {});
    S.closers.assign(n, {});
    for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j) {
            Gmat M = gmat_mul(S.mats[i], S.mats[j]);
            Gmat cand = gmat_projective_canonical(gmat_conj_transpose(M));
            auto it = canon_index.find(cand);
            bool closes = false;
            if (it != canon_index.end()) {
                // verify: s s' s'' is scalar
                closes = gmat_is_scalar(gmat_mul(M, S.mats[it->second]));
            }
            if (closes) S.closers[i].push_back(j);
            else S.sigma[i].push_back(j);
        }
}

/// Geodesic words of length r: chains (s_1, ..., s_r) with s_i in
/// Sigma_{s_{i-1}}.  Returns the canonical projective product matrices;
/// checks the collision-free property (all products distinct).
struct PowerWords {
    unsigned r = 0;
    std::vector<Gmat> canon;               // product canonical forms, one per word
    std::vector<std::vector<u32>> chains;  // generator index chains
};

inline PowerWords power_generators(const CayleySp& S, unsigned r) {
    PowerWords W;
    W.r = r;
    std::vector<std::pair<Gmat, std::vector<u32>>> frontier;
    for (u32 i = 0; i < S.mats.size(); ++i) frontier.push_back({S.mats[i], {i}});
    for (unsigned step = 1; step < r; ++step) {
        std::vector<std::pair<Gmat, std::vector<u32>>> next;
        for (auto& [m, chain] : frontier)
            for (u32 j : S.sigma[chain.back()]) {
                auto c2 = chain;
                c2.push_back(j);
                next.push_back({gmat_mul(m, S.mats[j]), std::move(c2)});
            }
        frontier = std::move(next);
    }
    std::unordered_set<Gmat, GmatHash> seen;
    for (auto& [m, chain] : frontier) {
        Gmat c = gmat_projective_canonical(m);
        if (!seen.insert(c).second) throw std::runtime_error("power_generators: collision among geodesic words");
        W.canon.push_back(c);
        W.chains.push_back(chain);
    }
    return W;
}

// ---------------------------------------------------------------------------
// Reduction mod q and the Cayley complex closure
// ---------------------------------------------------------------------------

/// A PGL_3(F_q) element as a projectively normalized matrix (first nonzero
/// entry in row-major order scaled to 1).
using ProjMat = std::array<u16, 9>;

struct ProjMatHash {
    std::size_t operator()(const ProjMat& m) const {
        u64 h = 0x853c49e6748fea9bULL;
        for (u16 v : m) h = mix64(h ^ v);
        return h;
    }
};

class ProjectiveGroup {
public:
    explicit ProjectiveGroup(u64 q) : q_(u32(q)) {
        if (!is_prime_u64(q)) throw std::invalid_argument("ProjectiveGroup: q must be prime");
        inv_.assign(q_, 0);
        for (u32 a = 1; a < q_; ++a) {
            u32 r = 1, b = a, e = q_ - 2;
            while (e) {
                if (e & 1) r = u32(u64(r) * b % q_);
                b = u32(u64(b) * b % q_);
                e >>= 1;
            }
            inv_[a] = u16(r);
        }
    }

    u32 q() const { return q_; }

    ProjMat normalize(std::array<u32, 9> m) const {
        u32 lead = 0;
        for (int i = 0; i < 9; ++i)
            if (m[i] % q_ != 0) { lead = m[i] % q_; break; }
        if (lead == 0) throw std::domain_error("ProjectiveGroup: zero matrix");
        u32 s = inv_[lead];
        ProjMat out;
        for (int i = 0; i < 9; ++i) out[i] = u16(u64(m[i] % q_) * s % q_);
        return out;
    }

    ProjMat mul(const ProjMat& a, const ProjMat& b) const {
        std::array<u32, 9> c{};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                u32 v = a[i * 3 + k];
                if (!v) continue;
                for (int j = 0; j < 3; ++j) c[i * 3 + j] += v * b[k * 3 + j];
            }
        return normalize(c);
    }

    /// s^{-1} via the adjugate (projective inverse).
    ProjMat inverse(const ProjMat& m) const {
        auto at = [&](int i, int j) { return u64(m[i * 3 + j]); };
        auto cof = [&](int i0, int i1, int j0, int j1) {
            u64 x = (at(i0, j0) * at(i1, j1)) % q_;
            u64 y = (at(i0, j1) * at(i1, j0)) % q_;
            return u32((x + q_ - y % q_) % q_);
        };
        std::array<u32, 9> adj{};
        adj[0] = cof(1, 2, 1, 2);
        adj[1] = u32((q_ - cof(0, 2, 1, 2) % q_) % q_);
        adj[2] = cof(0, 1, 1, 2);
        adj[3] = u32((q_ - cof(1, 2, 0, 2) % q_) % q_);
        adj[4] = cof(0, 2, 0, 2);
        adj[5] = u32((q_ - cof(0, 1, 0, 2) % q_) % q_);
        adj[6] = cof(1, 2, 0, 1);
        adj[7] = u32((q_ - cof(0, 2, 0, 1) % q_) % q_);
        adj[8] = cof(0, 1, 0, 1);
        return normalize(adj);
    }

    ProjMat identity() const {
        ProjMat m{};
        m[0] = m[4] = m[8] = 1;
        return m;
    }

private:
    u32 q_;
    std::vector<u16> inv_;
};

/// eps = sqrt(-1) in F_q, the smaller of the two roots.
inline u32 sqrt_minus_one(u64 q) {
    for (u32 e = 2; e < q; ++e)
        if ((u64(e) * e) % q == q - 1) return e;
    throw std::invalid_argument("sqrt_minus_one: q must be 1 mod 4");
}

/// eta: Z[i] -> F_q, i -> eps.
inline ProjMat reduce_mod_q(const ProjectiveGroup& G, const Gmat& m, u32 eps) {
    std::array<u32, 9> out{};
    const u32 q = G.q();
    for (int i = 0; i < 9; ++i) {
        i64 v = m[i].a % i64(q) + i64(eps) * (m[i].b % i64(q));
        v %= i64(q);
        if (v < 0) v += q;
        out[i] = u32(v);
    }
    return G.normalize(out);
}

/**
 * BFS closure of <S_{p,q}> inside PGL_3(F_q).  Deterministic element order
 * (identity first, then BFS with generators in S_p order).  The group is
 * PSL_3(F_q) or PGL_3(F_q).
 */
struct CayleyClosure {
    u64 p = 0, q = 0;
    u32 eps = 0;
    std::vector<ProjMat> gens;      // images of S_p, in S_p order
    std::vector<ProjMat> elements;  // BFS order
    std::unordered_map<ProjMat, u32, ProjMatHash> index;

    u32 n() const { return u32(elements.size()); }

    u32 id_of(const ProjMat& m) const {
        auto it = index.find(m);
        if (it == index.end()) throw std::runtime_error("CayleyClosure: element outside closure");
        return it->second;
    }
};

inline CayleyClosure cayley_closure(const ProjectiveGroup& G, const CayleySp& S, u64 max_elements = 5000000) {
    CayleyClosure C;
    C.p = S.p;
    C.q = G.q();
    C.eps = sqrt_minus_one(G.q());
    for (auto& m : S.mats) C.gens.push_back(reduce_mod_q(G, m, C.eps));
    {
        std::unordered_set<ProjMat, ProjMatHash> distinct(C.gens.begin(), C.gens.end());
        if (distinct.size() != S.mats.size())
            throw std::runtime_error("cayley_closure: eta is not injective on S_p");
    }
    C.elements.push_back(G.identity());
    C.index.emplace(C.elements[0], 0);
    for (u32 head = 0; head < C.elements.size(); ++head) {
        ProjMat cur = C.elements[head];
        for (auto& g : C.gens) {
            ProjMat nxt = G.mul(cur, g);
            if (C.index.emplace(nxt, u32(C.elements.size())).second) {
                if (C.elements.size() >= max_elements) throw std::overflow_error("cayley_closure: budget exceeded");
                C.elements.push_back(nxt);
            }
        }
    }
    return C;
}

/// |GL_3(F_q)| / (q-1), the order of PGL_3(F_q).
inline u64 pgl3_order(u64 q) {
    u64 q3 = q * q * q;
    return (q3 - 1) * (q3 - q) * (q3 - q * q) / (q - 1);
}

/// Tripartiteness test: colors propagate along color-1 edges (col +1 mod 3);
/// returns true iff the coloring is consistent on the whole closure.
inline bool closure_is_tripartite(const ProjectiveGroup& G, const CayleyClosure& C) {
    std::vector<int8_t> col(C.n(), -1);
    col[0] = 0;
    std::vector<u32> stack{0};
    while (!stack.empty()) {
        u32 v = stack.back();
        stack.pop_back();
        for (auto& g : C.gens) {
            u32 w = C.id_of(G.mul(C.elements[v], g));
            int8_t want = int8_t((col[v] + 1) % 3);
            if (col[w] < 0) {
                col[w] = want;
                stack.push_back(w);
            } else if (col[w] != want) {
                return false;
            }
        }
    }
    return true;
}

/**
 * The link of the identity vertex in the Cayley complex: out-neighbors
 * eta(s), in-neighbors eta(s)^{-1}, one link edge per triangle {e, s, ss'}
 * (s' a triangle closer of s).  For a building-like quotient this is the
 * flag graph of P^2(F_p): bipartite, (p+1)-regular, 2(p^2+p+1) vertices.
 */
struct IdentityLink {
    std::vector<u32> vertex_ids;           // closure element ids (out then in)
    std::vector<std::vector<u32>> adj;     // local
    u64 n_out = 0, n_in = 0;
};

inline IdentityLink identity_link(const ProjectiveGroup& G, const CayleySp& S, const CayleyClosure& C) {
    IdentityLink L;
    std::unordered_map<u32, u32> local;
    auto add = [&](u32 gid) {
        auto it = local.find(gid);
        if (it != local.end()) return it->second;
        u32 i = u32(L.vertex_ids.size());
        local.emplace(gid, i);
        L.vertex_ids.push_back(gid);
        L.adj.emplace_back();
        return i;
    };
    for (auto& g : C.gens) add(C.id_of(g));
    L.n_out = L.vertex_ids.size();
    for (auto& g : C.gens) add(C.id_of(G.inverse(g)));
    L.n_in = L.vertex_ids.size() - L.n_out;
    for (u32 s = 0; s < C.gens.size(); ++s)
        for (u32 sp : S.closers[s]) {
            u32 a = add(C.id_of(C.gens[s]));
            u32 b = add(C.id_of(G.mul(C.gens[s], C.gens[sp])));
            L.adj[a].push_back(b);
            L.adj[b].push_back(a);
        }
    return L;
}

} // namespace hdx
