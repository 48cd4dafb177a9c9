#pragma once

#include <cmath>
#include <functional>

#include "cayley.hpp"
#include "colored_complex.hpp"
#include "hall_littlewood.hpp"

namespace hdx {

// ---------------------------------------------------------------------------
// Geodesic operators A_m on an enumerated colored complex
// ---------------------------------------------------------------------------

/// Endpoints of color-1 m-geodesics from v (S^1_m) or color-2 (S^2_m).
inline std::vector<u32> geodesic_endpoints(const ColoredComplex& X, u32 v, unsigned m, bool color2) {
    std::vector<u32> out;
    auto gs = color2 ? X.geodesics_from_color2(v, m) : X.geodesics_from(v, m);
    out.reserve(gs.size());
    for (auto& g : gs) out.push_back(g.back());
    return out;
}

/// (A_m f)(v) = sum over S^1_m(v) and S^2_m(v); m = 0 gives the identity.
/// Endpoints are summed with geodesic multiplicity.
inline std::vector<i64> apply_Am(const ColoredComplex& X, const std::vector<i64>& f, unsigned m) {
    const u32 n = X.n_vertices();
    std::vector<i64> out(n, 0);
    if (m == 0) return f;
    for (u32 v = 0; v < n; ++v) {
        i64 s = 0;
        for (u32 w : geodesic_endpoints(X, v, m, false)) s += f[w];
        for (u32 w : geodesic_endpoints(X, v, m, true)) s += f[w];
        out[v] = s;
    }
    return out;
}

/// deg(A_m) = 2 (q^2+q+1) q^(2(m-1)).
inline u64 am_degree_formula(u64 q, unsigned m) {
    if (m == 0) return 1;
    return 2 * (q * q + q + 1) * ipow(q, 2 * (m - 1));
}

/**
 * All r-geodesics through v, with the position of v marked: backward part =
 * reversed color-2 j-geodesic, forward part = color-1 (r-j)-geodesic, with
 * the junction triple checked.
 */
inline std::vector<std::pair<std::vector<u32>, unsigned>> geodesics_through(const ColoredComplex& X, u32 v,
                                                                            unsigned r) {
    std::vector<std::pair<std::vector<u32>, unsigned>> out;
    for (unsigned j = 0; j <= r; ++j) {
        auto backs = (j == 0) ? std::vector<std::vector<u32>>{{v}} : X.geodesics_from_color2(v, j);
        auto fwds = (j == r) ? std::vector<std::vector<u32>>{{v}} : X.geodesics_from(v, r - j);
        for (auto& b : backs)
            for (auto& f : fwds) {
                if (j > 0 && j < r) {
                    // junction triple (b[1], v, f[1])
                    if (b[1] == f[1] || X.is_triangle(b[1], v, f[1])) continue;
                }
                std::vector<u32> path(b.rbegin(), b.rend());
                path.insert(path.end(), f.begin() + 1, f.end());
                out.push_back({std::move(path), j});
            }
    }
    return out;
}

/// N_m^(r) closed form: (r+1)(q^2+q+1) q^(2(r-1)) at m = 0, else (r-m+1) q^(2(r-m)).
inline u64 nmr_formula(u64 q, unsigned r, unsigned m) {
    if (m == 0) return u64(r + 1) * (q * q + q + 1) * ipow(q, 2 * (r - 1));
    return u64(r - m + 1) * ipow(q, 2 * (r - m));
}

struct GvrReport {
    bool n_table_ok = true;
    bool lambda1_ok = true;
    bool decomposition_ok = true;
    u64 pairs_checked = 0;
    u64 functions_checked = 0;
    std::string note;
};

/**
 * G^(r) structure checks on an enumerated complex (a building ball): N_m^(r)
 * counts at sampled interior vertex pairs, lambda_1 on constants, and the
 * decomposition A^2|vertex = sum_m N_m^(r) A_m on random integer functions.
 * Only vertices with dist(v) + r <= R carry complete building data; the
 * caller passes that set as `valid`.
 */
inline GvrReport gvr_structure(const ColoredComplex& X, u64 q, unsigned r, const std::vector<u32>& valid,
                               u64 sample_pairs, unsigned n_functions, u64 seed) {
    GvrReport rep;
    Rng rng(seed);
    // N_m counts and lambda_1 at sampled vertices
    u64 want_through = nmr_formula(q, r, 0);
    std::vector<u32> sample_vs;
    for (u64 t = 0; t < std::min<u64>(valid.size(), 25); ++t) sample_vs.push_back(valid[rng.below(valid.size())]);
    for (u32 v : sample_vs) {
        auto through = geodesics_through(X, v, r);
        if (through.size() != want_through) {
            rep.lambda1_ok = false;
            rep.note = "geodesics-through count mismatch at vertex " + std::to_string(v);
        }
        // bucket by (m, endpoint w in S^1_m(v)) and compare with N_m^(r)
        for (unsigned m = 1; m <= r && rep.pairs_checked < sample_pairs; ++m) {
            std::map<u32, u64> counts; // w -> #geodesics containing v then w at offset m
            for (auto& [path, pos] : through) {
                if (pos + m <= r) ++counts[path[pos + m]];
            }
            // S^1_m(v) from direct enumeration
            auto s1 = geodesic_endpoints(X, v, m, false);
            std::set<u32> s1set(s1.begin(), s1.end());
            if (s1set.size() != lines_count_formula(q, m)) rep.n_table_ok = false;
            for (u32 w : s1set) {
                u64 got = counts.count(w) ? counts[w] : 0;
                if (got != nmr_formula(q, r, m)) {
                    rep.n_table_ok = false;
                    rep.note = "N_m mismatch m=" + std::to_string(m);
                }
                ++rep.pairs_checked;
            }
        }
    }
    // decomposition on random functions, evaluated at sampled valid vertices
    const u32 n = X.n_vertices();
    for (unsigned t = 0; t < n_functions; ++t) {
        std::vector<i64> f(n);
        for (auto& x : f) x = i64(rng.below(2001)) - 1000;
        // rhs: sum_m N_m^(r) (A_m f), computed pointwise at samples
        for (u32 v : sample_vs) {
            i64 lhs = 0;
            for (auto& [path, pos] : geodesics_through(X, v, r)) {
                (void)pos;
                for (u32 w : path) lhs += f[w];
            }
            i64 rhs = 0;
            for (unsigned m = 0; m <= r; ++m) {
                i64 am = 0;
                if (m == 0) am = f[v];
                else {
                    for (u32 w : geodesic_endpoints(X, v, m, false)) am += f[w];
                    for (u32 w : geodesic_endpoints(X, v, m, true)) am += f[w];
                }
                rhs += i64(nmr_formula(q, r, m)) * am;
            }
            if (lhs != rhs) {
                rep.decomposition_ok = false;
                rep.note = "decomposition mismatch at v=" + std::to_string(v);
            }
        }
        ++rep.functions_checked;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Word-level machinery for r-walks on Cayley complexes
// ---------------------------------------------------------------------------

/**
 * Geodesic words of length r over S_p with their triangle-closure table:
 * closers[w] lists the words w' such that (e, W, W W') is a triangle of the
 * geodesic r-power, i.e. (W W')^* is proportional to some r-word W''.
 * In the building there are exactly (p+1) p^(r-1) closers per word.
 */
struct WordSystem {
    unsigned r = 0;
    PowerWords words;
    std::unordered_map<Gmat, u32, GmatHash> word_index;
    std::vector<std::vector<u32>> closers;      // w -> list of w'
    std::vector<std::vector<u32>> third_side;   // parallel: the word index of W''

    u32 n_words() const { return u32(words.canon.size()); }
};

inline WordSystem build_word_system(const CayleySp& S, unsigned r, unsigned threads = 1) {
    WordSystem W;
    W.r = r;
    W.words = power_generators(S, r);
    const u32 n = W.n_words();
    for (u32 i = 0; i < n; ++i) W.word_index.emplace(W.words.canon[i], i);
    W.closers.assign(n, {});
    W.third_side.assign(n, {});
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (u32 j = 0; j < n; ++j) {
                Gmat M = gmat_mul(W.words.canon[i], W.words.canon[j]);
                Gmat cand = gmat_projective_canonical(gmat_conj_transpose(M));
                auto it = W.word_index.find(cand);
                if (it == W.word_index.end()) continue;
                // verify the closure: M * W'' is scalar
                if (!gmat_is_scalar(gmat_mul(M, W.words.canon[it->second]))) continue;
                W.closers[i].push_back(j);
                W.third_side[i].push_back(it->second);
            }
        }
    });
    return W;
}

/**
 * The r-walk state on a Cayley complex: the current geodesic as (start
 * element, word).  One step picks a uniform triangle through the cell and
 * moves to one of its other two edges uniformly (multiplicity-weighted
 * simple walk on cells); `step_forward` restricts to the contiguous
 * continuation (v1 -> v2), which keeps the vertex trace a path.
 */
struct RWalkState {
    u32 start = 0; // closure element id
    u32 word = 0;
};

class CayleyWalker {
public:
    CayleyWalker(const ProjectiveGroup& G, const CayleySp& S, const CayleyClosure& C, const WordSystem& W)
        : G_(G), S_(S), C_(C), W_(W) {
        // reduced word matrices and per-word chain prefixes as group elements
        const u32 n = W.n_words();
        word_elem_.resize(n);
        for (u32 i = 0; i < n; ++i) word_elem_[i] = C_.id_of(reduce_mod_q(G_, W_.words.canon[i], C_.eps));
    }

    const WordSystem& words() const { return W_; }
    const CayleyClosure& closure() const { return C_; }

    RWalkState uniform_state(Rng& rng) const {
        RWalkState s;
        s.start = u32(rng.below(C_.n()));
        s.word = uniform_word(rng);
        return s;
    }

    /// Two-stage uniform geodesic word: uniform first letter, then uniform
    /// continuations (exact uniformity by regularity of the chain counts).
    u32 uniform_word(Rng& rng) const {
        // chains are enumerated lexicographically: index = first * p^2^(r-1)...
        // sample directly by index since every chain is one word
        return u32(rng.below(W_.n_words()));
    }

    /// Vertex ids (closure elements) along the geodesic of a state.
    std::vector<u32> leg_vertices(const RWalkState& s) const {
        std::vector<u32> out{s.start};
        ProjMat cur = C_.elements[s.start];
        for (u32 gi : W_.words.chains[s.word]) {
            cur = G_.mul(cur, C_.gens[gi]);
            out.push_back(C_.id_of(cur));
        }
        return out;
    }

    u32 end_vertex(const RWalkState& s) const {
        return C_.id_of(G_.mul(C_.elements[s.start], C_.elements[word_elem_[s.word]]));
    }

    /// Contiguous step: uniform triangle, move to the (v1 -> v2) edge.
    RWalkState step_forward(const RWalkState& s, Rng& rng) const {
        const auto& cl = W_.closers[s.word];
        if (cl.empty()) throw std::runtime_error("CayleyWalker: dead end (corrupt data)");
        u32 pick = u32(rng.below(cl.size()));
        RWalkState t;
        t.start = end_vertex(s);
        t.word = cl[pick];
        return t;
    }

    /// Full cell-walk step: uniform triangle, then one of the other two cells.
    RWalkState step(const RWalkState& s, Rng& rng) const {
        const auto& cl = W_.closers[s.word];
        if (cl.empty()) throw std::runtime_error("CayleyWalker: dead end (corrupt data)");
        u32 pick = u32(rng.below(cl.size()));
        bool second = rng.below(2) == 1;
        u32 v1 = end_vertex(s);
        if (!second) return RWalkState{v1, cl[pick]};
        RWalkState mid{v1, cl[pick]};
        return RWalkState{end_vertex(mid), W_.third_side[s.word][pick]};
    }

    /// Triangle count through a cell (must be (p+1) p^(r-1) on building data).
    u64 triangles_through(const RWalkState& s) const { return W_.closers[s.word].size(); }

    /// Checks that the corner triple of a contiguous transition is a triangle
    /// of the complex (adjacent pairwise in the Cayley graph).
    bool corner_is_triangle(const RWalkState& before, const RWalkState& after) const {
        auto legs = leg_vertices(before);
        u32 u = legs[legs.size() - 2];
        u32 v = legs.back();
        auto legs2 = leg_vertices(after);
        if (legs2.front() != v) return false;
        u32 x = legs2[1];
        return adjacent(u, v) && adjacent(v, x) && adjacent(u, x);
    }

    bool adjacent(u32 a, u32 b) const {
        ProjMat d = G_.mul(G_.inverse(C_.elements[a]), C_.elements[b]);
        for (auto& g : C_.gens) {
            if (d == g) return true;
            if (d == G_.inverse(g)) return true;
        }
        return false;
    }

private:
    const ProjectiveGroup& G_;
    const CayleySp& S_;
    const CayleyClosure& C_;
    const WordSystem& W_;
    std::vector<u32> word_elem_;
};

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

struct WilsonInterval {
    double low = 0, high = 1;
};

/// 95% Wilson score interval for k successes out of n.
inline WilsonInterval wilson95(u64 k, u64 n) {
    if (n == 0) return {0, 1};
    const double z = 1.959963984540054;
    double phat = double(k) / double(n), nn = double(n);
    double denom = 1 + z * z / nn;
    double center = (phat + z * z / (2 * nn)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / nn + z * z / (4 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct SamplerReport {
    u64 trials = 0;
    u64 bad = 0;
    double bad_fraction = 0;
    WilsonInterval ci;
    double target = 1; // 1/f, clamped to [0,1]... kept unclamped for reporting
    bool holds_at_95 = false;
    bool target_vacuous = false;
    std::string note;
};

/// f(eps, alpha) = exp(eps^2 k (1 - lambda) / 60) for k-walk samplers.
inline double expander_sampler_f(double eps, u64 k, double lambda) {
    return std::exp(eps * eps * double(k) * (1.0 - lambda) / 60.0);
}

/**
 * Monte-Carlo estimate of the k-walk sampler quality on a regular graph with
 * known lambda: sample uniform k-vertex walks, measure the fraction with
 * ||walk cap S|/k - |S|/|L|| >= eps, compare against 1/f at 95% confidence.
 */
inline SamplerReport walk_sampler_experiment(const std::vector<std::vector<u32>>& adj, const std::vector<char>& inS,
                                             unsigned k, double eps, double lambda, u64 trials, u64 seed) {
    const u64 n = adj.size();
    u64 s_size = 0;
    for (char c : inS) s_size += c != 0;
    double alpha = double(s_size) / double(n);
    SamplerReport rep;
    rep.trials = trials;
    for (u64 t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        u32 v = u32(rng.below(n));
        u64 hits = inS[v] ? 1 : 0;
        for (unsigned step = 1; step < k; ++step) {
            v = adj[v][rng.below(adj[v].size())];
            hits += inS[v] ? 1 : 0;
        }
        double frac = double(hits) / double(k);
        if (std::abs(frac - alpha) >= eps) ++rep.bad;
    }
    rep.bad_fraction = double(rep.bad) / double(trials);
    rep.ci = wilson95(rep.bad, rep.trials);
    rep.target = 1.0 / expander_sampler_f(eps, k, lambda);
    rep.target_vacuous = rep.target >= 1.0;
    rep.holds_at_95 = rep.ci.low <= rep.target;
    return rep;
}

struct DoubleSamplerReport {
    SamplerReport level1; // vertices vs k-geodesics
    SamplerReport level2; // k-geodesics vs k-walks
    bool legs_structural_ok = true; // each walk contains exactly K/k geodesics
    bool density_caveat = false;    // q < 37: theorem constants out of range
    u64 k = 0, K = 0;
};

/**
 * Double-sampler Monte-Carlo on a Cayley complex: L = vertices, R = directed
 * k-geodesics, W = contiguous k-walks of length K/k.  S is a seeded random
 * alpha-subset of L; T is a hashed pseudo-random alpha-subset of R (R is too
 * large to materialize).  Compares measured bad fractions against the
 * theorem's 1/f targets (vacuous below the q >= 37 threshold; the caveat is
 * recorded in the report).
 */
inline DoubleSamplerReport double_sampler_experiment(const CayleyWalker& walker, unsigned k, unsigned K, double eps,
                                                     double alpha, u64 trials, u64 seed) {
    if (K % k != 0) throw std::invalid_argument("double_sampler_experiment: K must be a multiple of k");
    const auto& C = walker.closure();
    DoubleSamplerReport rep;
    rep.k = k;
    rep.K = K;
    rep.density_caveat = C.p < 37;
    const unsigned legs = K / k;

    // S: seeded alpha-subset of vertices
    std::vector<char> inS(C.n(), 0);
    {
        Rng rng(seed ^ 0x5eedULL);
        for (auto& c : inS) c = rng.unit() < alpha ? 1 : 0;
    }
    u64 s_size = 0;
    for (char c : inS) s_size += c;
    double alpha_S = double(s_size) / double(C.n());

    // T: hashed alpha-subset of R (membership by canonical (start, word) key)
    auto inT = [&](const RWalkState& s) {
        u64 h = mix64(mix64(seed ^ 0x7a11ULL) ^ (u64(s.start) << 20 | s.word));
        return (h >> 11) * (1.0 / 9007199254740992.0) < alpha;
    };

    // level 1: uniform geodesics vs S
    rep.level1.trials = trials;
    for (u64 t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        auto st = walker.uniform_state(rng);
        auto verts = walker.leg_vertices(st);
        u64 hits = 0;
        for (u32 v : verts) hits += inS[v];
        double frac = double(hits) / double(verts.size());
        if (std::abs(frac - alpha_S) >= eps) ++rep.level1.bad;
    }
    rep.level1.bad_fraction = double(rep.level1.bad) / double(trials);
    rep.level1.ci = wilson95(rep.level1.bad, trials);
    rep.level1.target = alpha / (eps * eps * double(k));
    rep.level1.target_vacuous = rep.level1.target >= 1.0;
    rep.level1.holds_at_95 = rep.level1.ci.low <= rep.level1.target;
    if (rep.level1.target_vacuous) rep.level1.note = "first-level target alpha/(eps^2 k) >= 1 at these parameters";

    // estimate |T|/|R| by sampling
    double alpha_T;
    {
        u64 hits = 0, m = std::max<u64>(20000, trials / 4);
        for (u64 t = 0; t < m; ++t) {
            Rng rng(seed ^ 0xaaaULL, t);
            auto st = walker.uniform_state(rng);
            hits += inT(st) ? 1 : 0;
        }
        alpha_T = double(hits) / double(m);
    }

    // level 2: uniform K/k-leg walks vs T
    rep.level2.trials = trials;
    for (u64 t = 0; t < trials; ++t) {
        Rng rng(seed ^ 0x222ULL, t);
        auto st = walker.uniform_state(rng);
        u64 hits = inT(st) ? 1 : 0;
        for (unsigned leg = 1; leg < legs; ++leg) {
            auto nxt = walker.step_forward(st, rng);
            if (t < 50 && !walker.corner_is_triangle(st, nxt)) rep.legs_structural_ok = false;
            st = nxt;
            hits += inT(st) ? 1 : 0;
        }
        double frac = double(hits) / double(legs);
        if (std::abs(frac - alpha_T) >= eps) ++rep.level2.bad;
    }
    rep.level2.bad_fraction = double(rep.level2.bad) / double(trials);
    rep.level2.ci = wilson95(rep.level2.bad, trials);
    double gap = 1.0 / 3.0 - 2.0 / std::sqrt(double(C.p));
    rep.level2.target = std::exp(-eps * eps * gap * double(K) / (60.0 * double(k)));
    rep.level2.target_vacuous = rep.level2.target >= 1.0;
    rep.level2.holds_at_95 = rep.level2.ci.low <= rep.level2.target;
    if (rep.density_caveat)
        rep.level2.note = "density q < 37: the theorem's spectral-gap term is negative, target is vacuous";
    return rep;
}

/// Detailed-balance test for the 2-choice cell walk on enumerated small data:
/// the transition kernel is symmetric, so uniform is stationary.
struct DetailedBalanceReport {
    bool symmetric = true;
    u64 cells = 0;
};

inline DetailedBalanceReport rwalk_detailed_balance(const PowerComplex& P) {
    // cells = directed power edges; neighbors via shared triangles
    DetailedBalanceReport rep;
    std::map<std::pair<u32, u32>, u32> eid;
    for (u32 i = 0; i < P.edges.size(); ++i) eid[P.edges[i]] = i;
    rep.cells = P.edges.size();
    // count transitions cell -> cell over all triangles: each triangle
    // (v0,v1,v2) has cells (v0,v1),(v1,v2),(v2,v0); each unordered cell pair
    // within a triangle contributes symmetrically
    std::map<std::pair<u32, u32>, u64> trans;
    for (auto& t : P.triangles) {
        std::array<std::pair<u32, u32>, 3> cells = {{{t[0], t[1]}, {t[1], t[2]}, {t[2], t[0]}}};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;
                auto ia = eid.find(cells[a]);
                auto ib = eid.find(cells[b]);
                if (ia == eid.end() || ib == eid.end()) { rep.symmetric = false; continue; }
                ++trans[{ia->second, ib->second}];
            }
    }
    for (auto& [key, cnt] : trans) {
        auto rev = trans.find({key.second, key.first});
        if (rev == trans.end() || rev->second != cnt) rep.symmetric = false;
    }
    return rep;
}

} // namespace hdx
