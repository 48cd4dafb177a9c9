#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "delta_matrix.hpp"
#include "eigensolve.hpp"
#include "exact_rank.hpp"
#include "graph_iso.hpp"
#include "modules_flags.hpp"

namespace hdx {

/**
 * Q = A^2 restricted to the line side of P^2_fr(O_r), stored both dense
 * (exact 64-bit integers) and Delta-compressed.  The compressed form feeds an
 * O(r^3)-sized verification path that is independent of the dense products.
 */
struct QOperator {
    u64 q = 0;
    unsigned r = 0;
    u32 n = 0;
    std::vector<i64> dense;      // n*n, entry = # common planes
    std::vector<uint8_t> didx;   // n*n, Delta(v,w)
    DeltaAlgebra alg{2, 1};
    DeltaAlgebra::Mat compressed;
};

inline QOperator build_q_operator(const FreeProjPlaneGraph& G) {
    QOperator Q;
    Q.q = G.ring.q();
    Q.r = G.ring.r();
    Q.n = u32(G.n_lines());
    Q.alg = DeltaAlgebra(Q.q, Q.r);
    const u32 n = Q.n;
    Q.dense.assign(std::size_t(n) * n, 0);
    for (u32 p = 0; p < n; ++p) {
        const auto& ls = G.adj[std::size_t(n) + p];
        for (u32 a : ls)
            for (u32 b : ls) Q.dense[std::size_t(a) * n + b] += 1;
    }
    Q.didx.assign(std::size_t(n) * n, 0);
    for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j)
            Q.didx[std::size_t(i) * n + j] = uint8_t(delta(G.ring, G.lines[i], G.lines[j]));
    Q.compressed = Q.alg.Q();
    return Q;
}

/// Checks that the dense Q is Delta-stratified and matches Q_delta.
inline bool q_matches_delta_profile(const QOperator& Q) {
    const u32 n = Q.n;
    for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j) {
            mpz_class want = Q.compressed[Q.didx[std::size_t(i) * n + j]];
            if (want != Q.dense[std::size_t(i) * n + j]) return false;
        }
    return true;
}

struct AnnihilatorReport {
    bool holds = false;
    mpz_class c = 0;          // the constant: prod (Q - q^j) = c * J
    bool c_integral = false;
    bool dense_checked = false;
    bool compressed_checked = false;
};

/**
 * The annihilator identity prod_{j=r}^{2r-1} (Q - q^j I) = c J, verified in
 * exact arithmetic.  The compressed route always runs; the dense route runs
 * when n is small enough to hold the products (entries are bounded well below
 * 2^63 at desk scale, guarded by an overflow check).
 */
inline AnnihilatorReport verify_annihilator(const QOperator& Q, bool dense_too = true) {
    AnnihilatorReport rep;
    const u64 q = Q.q;
    const unsigned r = Q.r;
    // compressed path
    auto B = Q.alg.identity();
    for (unsigned j = r; j <= 2 * r - 1; ++j)
        B = Q.alg.mul(B, Q.alg.sub_scalar(Q.alg.Q(), mpz_class(ipow(q, j))));
    rep.compressed_checked = true;
    bool const_comp = Q.alg.is_constant(B);
    mpz_class c_comp = B[0];

    // expected c from the row sum: prod (k^2 - q^j) / n
    mpz_class k2 = mpz_class((q + 1) * (q + 1)) * mpz_class(ipow(q, 2 * (r - 1)));
    mpz_class prod = 1;
    for (unsigned j = r; j <= 2 * r - 1; ++j) prod *= k2 - mpz_class(ipow(q, j));
    mpz_class cq, crem;
    mpz_tdiv_qr(cq.get_mpz_t(), crem.get_mpz_t(), prod.get_mpz_t(), mpz_class(Q.n).get_mpz_t());
    rep.c = cq;
    rep.c_integral = (crem == 0);
    bool ok = const_comp && rep.c_integral && (c_comp == cq) && cq != 0;

    if (dense_too && !Q.dense.empty()) {
        const u32 n = Q.n;
        std::vector<i64> acc(std::size_t(n) * n, 0);
        for (u32 i = 0; i < n; ++i) acc[std::size_t(i) * n + i] = 1;
        std::vector<i64> factor(std::size_t(n) * n);
        std::vector<i64> next(std::size_t(n) * n);
        for (unsigned j = r; j <= 2 * r - 1; ++j) {
            i64 shift = i64(ipow(q, j));
            for (u32 a = 0; a < n; ++a)
                for (u32 b = 0; b < n; ++b)
                    factor[std::size_t(a) * n + b] = Q.dense[std::size_t(a) * n + b] - (a == b ? shift : 0);
            for (u32 a = 0; a < n; ++a)
                for (u32 b = 0; b < n; ++b) {
                    i128 s = 0;
                    for (u32 k = 0; k < n; ++k)
                        s += i128(acc[std::size_t(a) * n + k]) * factor[std::size_t(k) * n + b];
                    if (s > i128(INT64_MAX) / 4 || s < -(i128(INT64_MAX) / 4))
                        throw std::overflow_error("verify_annihilator: dense path overflow");
                    next[std::size_t(a) * n + b] = i64(s);
                }
            std::swap(acc, next);
        }
        rep.dense_checked = true;
        for (std::size_t t = 0; t < acc.size() && ok; ++t)
            if (mpz_class(acc[t]) != cq) ok = false;
    }
    rep.holds = ok;
    return rep;
}

struct SpectrumEntry {
    mpz_class value_squared; // eigenvalue of Q (= square of the +- pair on the graph)
    double value = 0;        // sqrt, as double
    u64 multiplicity = 0;    // multiplicity of each of +sqrt and -sqrt
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries; // descending by value
    std::string method;
    double max_numeric_deviation = -1; // vs the numeric path, when run
    bool exact_certified = false;
    bool bareiss_checked = false;
};

/**
 * Exact spectrum of P^2_fr(O_r) with multiplicities.
 *
 * Route: (1) the verified annihilator identity shows Q is annihilated by a
 * squarefree polynomial with the known roots, so Q is diagonalizable over Q
 * with eigenvalues among {k^2, q^j}.  (2) Multiplicities come from exact
 * integer traces of the spectral projectors, evaluated in the compressed
 * algebra.  (3) Ranks of (Q - lambda I) modulo a large prime bound each
 * eigenspace from above; since the rational multiplicities already sum to n,
 * the mod-p ranks certify every rank(Q - lambda I) over Q exactly.
 * (4) For small n the same ranks are recomputed by fraction-free elimination
 * over big integers.
 */
inline SpectrumReport spectrum_exact(const QOperator& Q, unsigned bareiss_max_n = 150) {
    auto ann = verify_annihilator(Q, /*dense_too=*/Q.n <= 1000);
    if (!ann.holds) throw std::runtime_error("spectrum_exact: annihilator identity failed (theorem violation)");

    const u64 q = Q.q;
    const unsigned r = Q.r;
    const u32 n = Q.n;
    std::vector<mpz_class> lambdas; // descending: k^2, q^{2r-1}, ..., q^r
    lambdas.push_back(mpz_class((q + 1) * (q + 1)) * mpz_class(ipow(q, 2 * (r - 1))));
    for (unsigned j = 2 * r - 1; j >= r; --j) lambdas.push_back(mpz_class(ipow(q, j)));

    SpectrumReport rep;
    rep.method = "annihilator+projector-traces+ranks";
    mpz_class total = 0, weighted = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        // projector trace: P_i = prod_{j != i} (Q - lambda_j)
        auto P = Q.alg.identity();
        mpz_class denom = 1;
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            if (j == i) continue;
            P = Q.alg.mul(P, Q.alg.sub_scalar(Q.alg.Q(), lambdas[j]));
            denom *= lambdas[i] - lambdas[j];
        }
        mpz_class tr = Q.alg.trace(P);
        mpz_class mult, rem;
        mpz_tdiv_qr(mult.get_mpz_t(), rem.get_mpz_t(), tr.get_mpz_t(), denom.get_mpz_t());
        if (rem != 0 || mult < 0) throw std::runtime_error("spectrum_exact: non-integral projector trace");
        SpectrumEntry e;
        e.value_squared = lambdas[i];
        e.value = std::sqrt(mpz_get_d(lambdas[i].get_mpz_t()));
        e.multiplicity = mpz_get_ui(mult.get_mpz_t());
        total += mult;
        weighted += mult * lambdas[i];
        rep.entries.push_back(std::move(e));
    }
    if (total != n) throw std::runtime_error("spectrum_exact: multiplicities do not sum to n");
    mpz_class trQ = mpz_class(n) * Q.alg.Q()[0];
    if (weighted != trQ) throw std::runtime_error("spectrum_exact: trace mismatch");

    // rank certification mod p (p prime, all lambdas distinct and < p)
    if (!Q.dense.empty()) {
        const u64 P = 2147483647ULL;
        u64 null_sum = 0;
        std::vector<i64> M(Q.dense);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            std::vector<i64> Mi(Q.dense);
            i64 lam = i64(mpz_get_ui(lambdas[i].get_mpz_t()));
            for (u32 d = 0; d < n; ++d) Mi[std::size_t(d) * n + d] -= lam;
            unsigned rk = rank_mod_p(Mi, n, n, P);
            if (n - rk != rep.entries[i].multiplicity)
                throw std::runtime_error("spectrum_exact: mod-p rank contradicts projector multiplicity");
            null_sum += n - rk;
            if (n <= bareiss_max_n) {
                unsigned rb = bareiss_rank_i64(Mi, n, n);
                if (rb != rk) throw std::runtime_error("spectrum_exact: bareiss rank mismatch");
                rep.bareiss_checked = true;
            }
        }
        if (null_sum != n) throw std::runtime_error("spectrum_exact: rank certificate failed");
        rep.exact_certified = true;
    }
    return rep;
}

/// Numeric cross-check: dense adjacency eigensolve of the full bipartite
/// graph, compared against {+-sqrt(lambda_i)} with multiplicities.
/// Returns the max absolute deviation.
inline double spectrum_numeric_deviation(const FreeProjPlaneGraph& G, const SpectrumReport& rep) {
    auto eigs = graph_eigenvalues(G.adj); // ascending, size 2n
    std::vector<double> expect;
    for (auto& e : rep.entries)
        for (u64 m = 0; m < e.multiplicity; ++m) {
            expect.push_back(e.value);
            expect.push_back(-e.value);
        }
    std::sort(expect.begin(), expect.end());
    if (expect.size() != eigs.size()) return 1e300;
    double dev = 0;
    for (std::size_t i = 0; i < eigs.size(); ++i) dev = std::max(dev, std::abs(eigs[i] - expect[i]));
    return dev;
}

struct NTableReport {
    bool holds = true;
    u64 checked_triples = 0;
    std::string first_mismatch;
};

/// Exhaustive check of the N^delta_{eps,zeta} counting table against the
/// realized Delta structure on lines.
inline NTableReport verify_N_table(const FreeProjPlaneGraph& G) {
    NTableReport rep;
    auto R = G.ring;
    const u32 n = u32(G.n_lines());
    DeltaAlgebra alg(R.q(), R.r());
    const unsigned r = R.r();
    std::vector<uint8_t> dd(std::size_t(n) * n);
    for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j) dd[std::size_t(i) * n + j] = uint8_t(delta(R, G.lines[i], G.lines[j]));
    // for every ordered pair (v,w), bucket u by (eps, zeta) and compare
    for (u32 v = 0; v < n; ++v)
        for (u32 w = 0; w < n; ++w) {
            unsigned d = dd[std::size_t(v) * n + w];
            std::vector<u64> counts((r + 1) * (r + 1), 0);
            for (u32 u = 0; u < n; ++u) {
                unsigned eps = dd[std::size_t(v) * n + u];
                unsigned zeta = dd[std::size_t(u) * n + w];
                ++counts[eps * (r + 1) + zeta];
            }
            for (unsigned eps = 0; eps <= r; ++eps)
                for (unsigned zeta = 0; zeta <= r; ++zeta) {
                    mpz_class want = alg.N(d, eps, zeta);
                    ++rep.checked_triples;
                    if (want != mpz_class(counts[eps * (r + 1) + zeta])) {
                        rep.holds = false;
                        if (rep.first_mismatch.empty())
                            rep.first_mismatch = "delta=" + std::to_string(d) + " eps=" + std::to_string(eps) +
                                                 " zeta=" + std::to_string(zeta) +
                                                 " counted=" + std::to_string(counts[eps * (r + 1) + zeta]);
                    }
                }
        }
    return rep;
}

struct IsospectralReport {
    bool spectra_equal = false;
    IsoStatus iso = IsoStatus::inconclusive;
    double spectra_deviation = 0;
    u64 iso_nodes = 0;
};

/// Builds P^2_fr over Z/q^r and F_q[t]/(t^r) (q prime), asserts exact
/// isospectrality, and runs the exhaustive isomorphism search.
inline IsospectralReport isospectral_pair(u64 q, unsigned r, u64 iso_budget = 200000000) {
    auto Rz = LocalRing::zmod(q, r);
    auto Rl = LocalRing::laurent_ring(q, 1, r);
    auto Gz = build_pfr2(Rz);
    auto Gl = build_pfr2(Rl);
    auto Qz = build_q_operator(Gz);
    auto Ql = build_q_operator(Gl);
    auto sz = spectrum_exact(Qz);
    auto sl = spectrum_exact(Ql);
    IsospectralReport rep;
    rep.spectra_equal = sz.entries.size() == sl.entries.size();
    if (rep.spectra_equal)
        for (std::size_t i = 0; i < sz.entries.size(); ++i)
            if (sz.entries[i].value_squared != sl.entries[i].value_squared ||
                sz.entries[i].multiplicity != sl.entries[i].multiplicity)
                rep.spectra_equal = false;
    rep.spectra_deviation = std::max(spectrum_numeric_deviation(Gz, sz), spectrum_numeric_deviation(Gl, sl));
    // bipartite sides as initial colors (lines vs planes); this only prunes
    // the search since any isomorphism maps regular bipartition blocks to
    // blocks (sides could swap, but both graphs have equal side sizes and the
    // search over side-preserving maps composed with the side swap is covered
    // by trying both colorings)
    std::vector<u32> c1(Gz.n_vertices(), 0), c2(Gl.n_vertices(), 0);
    for (std::size_t v = Gz.n_lines(); v < Gz.n_vertices(); ++v) c1[v] = 1;
    for (std::size_t v = Gl.n_lines(); v < Gl.n_vertices(); ++v) c2[v] = 1;
    auto res1 = graph_isomorphic(Gz.adj, Gl.adj, c1, c2, iso_budget);
    rep.iso_nodes = res1.nodes;
    if (res1.status == IsoStatus::isomorphic) {
        rep.iso = IsoStatus::isomorphic;
        return rep;
    }
    // swapped sides
    std::vector<u32> c2s(Gl.n_vertices(), 1);
    for (std::size_t v = Gl.n_lines(); v < Gl.n_vertices(); ++v) c2s[v] = 0;
    auto res2 = graph_isomorphic(Gz.adj, Gl.adj, c1, c2s, iso_budget);
    rep.iso_nodes += res2.nodes;
    if (res2.status == IsoStatus::isomorphic) rep.iso = IsoStatus::isomorphic;
    else if (res1.status == IsoStatus::non_isomorphic && res2.status == IsoStatus::non_isomorphic)
        rep.iso = IsoStatus::non_isomorphic;
    else
        rep.iso = IsoStatus::inconclusive;
    return rep;
}

struct MixingReport {
    u64 edges = 0;       // ordered-pair count of edges between S and T
    double bound = 0;    // lambda1 |S||T| / n + lambda2 sqrt(|S||T|)
    bool holds = false;
};

/// Expander mixing lemma comparison: |E(S,T)| (counting ordered pairs with
/// multiplicity on overlap) against lambda1 |S||T|/n + lambda2 sqrt(|S||T|).
inline MixingReport mixing_bound(const std::vector<std::vector<u32>>& adj,
                                 const std::vector<u32>& S, const std::vector<u32>& T,
                                 double lambda1, double lambda2) {
    MixingReport rep;
    std::vector<char> inT(adj.size(), 0);
    for (u32 t : T) inT[t] = 1;
    for (u32 s : S)
        for (u32 w : adj[s]) rep.edges += inT[w];
    double st = double(S.size()) * double(T.size());
    rep.bound = lambda1 * st / double(adj.size()) + lambda2 * std::sqrt(st);
    rep.holds = double(rep.edges) <= rep.bound + 1e-9;
    return rep;
}

} // namespace hdx
