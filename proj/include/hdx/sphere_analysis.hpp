#pragma once

#include <cmath>

#include "building.hpp"

namespace hdx {

/**
 * The induced graph on the r-sphere of a ball, with stratum labels.
 * Degrees inside the sphere follow the two-case table: q+1 when the stratum
 * tuple has exactly two distinct entries, 2q when all three are distinct.
 */
struct SphereGraph {
    u64 q = 0;
    unsigned r = 0;
    std::vector<u32> vertex_ids;                  // ids in the parent ball
    std::vector<std::array<unsigned, 3>> stratum; // per sphere vertex
    std::vector<std::vector<u32>> adj;            // local indices
};

inline SphereGraph build_sphere_graph(LatticeBall& B, unsigned r) {
    if (!B.strata_computed) stratify_ball(B);
    SphereGraph S;
    S.q = B.q;
    S.r = r;
    S.vertex_ids = B.sphere(r);
    std::unordered_map<u32, u32> local;
    for (u32 i = 0; i < S.vertex_ids.size(); ++i) local.emplace(S.vertex_ids[i], i);
    S.adj.assign(S.vertex_ids.size(), {});
    S.stratum.resize(S.vertex_ids.size());
    for (u32 i = 0; i < S.vertex_ids.size(); ++i) {
        u32 v = S.vertex_ids[i];
        S.stratum[i] = B.stratum[v];
        for (u32 w : B.adj[v]) {
            auto it = local.find(w);
            if (it != local.end()) S.adj[i].push_back(it->second);
        }
    }
    return S;
}

struct HalfSphereCutReport {
    u64 cut_edges = 0;       // |E(A, S_r \ A)|
    u64 vol_A = 0;           // sum of in-sphere degrees over A
    u64 vol_complement = 0;
    bool ratio_exact = false; // cut/vol(A) == (q^2-q+1) / ((q^2+q+1) r) exactly
    double ratio = 0;
    double bound = 0;        // (q^2-q+1)/((q^2+q+1) r)
    bool complement_symmetric = false;
};

/**
 * The explicit sparse cut on S_r for odd r >= 3: A is the union of strata
 * with max = r and (a >= b >= (r+1)/2, b > a >= c, b >= c > a, or
 * c > b >= (r+1)/2).  Crossing edges connect X_{r,(r+1)/2,0} with
 * X_{r,(r-1)/2,0} and X_{0,(r+1)/2,r} with X_{0,(r-1)/2,r}.
 */
inline HalfSphereCutReport half_sphere_cut(const SphereGraph& S) {
    if (S.r < 3 || S.r % 2 == 0) throw std::invalid_argument("half_sphere_cut: r must be odd and >= 3");
    const unsigned h = (S.r + 1) / 2;
    auto in_A = [&](const std::array<unsigned, 3>& s) {
        auto [a, b, c] = s;
        return (a >= b && b >= h) || (b > a && a >= c) || (b >= c && c > a) || (c > b && b >= h);
    };
    HalfSphereCutReport rep;
    const std::size_t n = S.vertex_ids.size();
    std::vector<char> inA(n, 0);
    for (std::size_t i = 0; i < n; ++i) inA[i] = in_A(S.stratum[i]);
    u64 cross_from_A = 0, cross_from_B = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (inA[i]) rep.vol_A += S.adj[i].size();
        else rep.vol_complement += S.adj[i].size();
        for (u32 w : S.adj[i]) {
            if (inA[i] && !inA[w]) ++cross_from_A;
            if (!inA[i] && inA[w]) ++cross_from_B;
        }
    }
    rep.cut_edges = cross_from_A;
    rep.complement_symmetric = (cross_from_A == cross_from_B);
    const u64 q = S.q;
    // exact rational comparison: cut * (q^2+q+1) * r == vol_A * (q^2-q+1)
    rep.ratio_exact = (rep.cut_edges * (q * q + q + 1) * S.r == rep.vol_A * (q * q - q + 1));
    rep.ratio = double(rep.cut_edges) / double(rep.vol_A);
    rep.bound = double(q * q - q + 1) / (double(q * q + q + 1) * S.r);
    return rep;
}

struct RayleighWitnessReport {
    double quotient = 0;        // <Mf,f>/<f,f> on the normalized adjacency
    double expected = 0;        // cos(2 pi / r)
    double pf_overlap = 0;      // |<f, v_PF>| / (|f| |v_PF|)
    bool degenerate = false;    // f vanishes identically (r = 2)
};

/// Evaluates the sine test function f = sin(2 pi j / r) on X_{r,j,0} against
/// the normalized adjacency M = D^{-1/2} A D^{-1/2}.
inline RayleighWitnessReport sphere_rayleigh_witness(const SphereGraph& S) {
    RayleighWitnessReport rep;
    const unsigned r = S.r;
    rep.expected = std::cos(2.0 * M_PI / r);
    const std::size_t n = S.vertex_ids.size();
    std::vector<double> f(n, 0.0);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, b, c] = S.stratum[i];
        if (a == r && c == 0) {
            f[i] = std::sin(2.0 * M_PI * b / r);
            if (std::abs(f[i]) > 1e-14) nonzero = true;
        }
    }
    if (!nonzero) {
        rep.degenerate = true;
        return rep;
    }
    // D^{-1/2} f, then <A g, g> with g = D^{-1/2} f
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!S.adj[i].empty()) g[i] = f[i] / std::sqrt(double(S.adj[i].size()));
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (u32 w : S.adj[i]) s += g[w];
        num += s * g[i];
        den += f[i] * f[i]; // <f,f> = <g's preimage, ...>; quotient uses f in the M inner product
    }
    // <Mf, f> where M = D^{-1/2} A D^{-1/2}: equals <A g, g> with g = D^{-1/2} f
    // and <f,f> in the plain inner product
    rep.quotient = num / den;

    // Perron vector of M by power iteration (M has top eigenvalue 1 with
    // eigenvector D^{1/2} 1 on a connected graph)
    std::vector<double> pf(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) pf[i] = std::sqrt(double(S.adj[i].size()));
    double nf = 0, npf = 0, ov = 0;
    for (std::size_t i = 0; i < n; ++i) {
        nf += f[i] * f[i];
        npf += pf[i] * pf[i];
        ov += f[i] * pf[i];
    }
    rep.pf_overlap = std::abs(ov) / std::sqrt(nf * npf);
    return rep;
}

struct SphereSpectrumReport {
    double lambda_r = 0;   // second-largest normalized eigenvalue
    double top = 0;        // should be 1
    std::string method;
    double residual = 0;
};

inline SphereSpectrumReport sphere_spectrum(const SphereGraph& S, unsigned dense_max = 4000) {
    SphereSpectrumReport rep;
    const std::size_t n = S.vertex_ids.size();
    if (n <= dense_max) {
        auto eigs = normalized_adjacency_eigenvalues(S.adj);
        rep.top = eigs[n - 1];
        rep.lambda_r = eigs[n - 2];
        rep.method = "dense";
        rep.residual = 0;
        return rep;
    }
    std::vector<double> dinv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!S.adj[i].empty()) dinv[i] = 1.0 / std::sqrt(double(S.adj[i].size()));
    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0;
            for (u32 w : S.adj[v]) s += dinv[w] * x[w];
            y[v] = dinv[v] * s;
        }
    };
    auto lz = lanczos_topk(n, matvec, 2, 400, 1e-10);
    if (lz.values.size() < 2) throw std::runtime_error("sphere_spectrum: lanczos failed");
    rep.top = lz.values[0];
    rep.lambda_r = lz.values[1];
    rep.method = "lanczos";
    rep.residual = std::max(lz.residuals[0], lz.residuals[1]);
    return rep;
}

/// Closed forms for lambda_(r), r = 1, 2.
inline double lambda_r_closed_form(u64 q, unsigned r) {
    if (r == 1) return std::sqrt(double(q)) / (double(q) + 1);
    if (r == 2) return std::sqrt(0.5 + std::sqrt(double(q)) / (2.0 * (double(q) + 1)));
    throw std::invalid_argument("lambda_r_closed_form: only r = 1, 2");
}

} // namespace hdx
