#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "common.hpp"

namespace hdx {

/// Dense symmetric eigenvalues, ascending.  Input is row-major n*n.
inline std::vector<double> dense_sym_eigenvalues(const std::vector<double>& a, std::size_t n) {
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = a[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

/// Adjacency eigenvalues of an unweighted graph, ascending.
inline std::vector<double> graph_eigenvalues(const std::vector<std::vector<u32>>& adj) {
    std::size_t n = adj.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        for (u32 w : adj[v]) a[v * n + w] += 1.0;
    return dense_sym_eigenvalues(a, n);
}

/// Second-largest eigenvalue of the degree-normalized adjacency
/// D^{-1/2} A D^{-1/2} of a graph (largest is 1 when connected).
/// Isolated vertices get row/col zero.
inline std::vector<double> normalized_adjacency_eigenvalues(const std::vector<std::vector<u32>>& adj) {
    std::size_t n = adj.size();
    std::vector<double> dinv(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        if (!adj[v].empty()) dinv[v] = 1.0 / std::sqrt(double(adj[v].size()));
    std::vector<double> a(n * n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        for (u32 w : adj[v]) a[v * n + w] += dinv[v] * dinv[w];
    return dense_sym_eigenvalues(a, n);
}

struct LanczosResult {
    std::vector<double> values;    // descending Ritz values (top-k)
    std::vector<double> residuals; // ||A v - lambda v|| / ||v|| per value
    unsigned iterations = 0;
    bool converged = false;
};

/**
 * Lanczos with full reorthogonalization for the top-k eigenvalues of a
 * symmetric operator given matrix-free.  `deflate` vectors (if any) are
 * projected out of every iterate (used to remove known trivial
 * eigenvectors, e.g. constants).  Deterministic for a fixed seed.
 *
 * Single-vector Lanczos resolves one Ritz value per eigenspace, so the
 * returned values are the top-k *distinct* eigenvalues.
 */
inline LanczosResult lanczos_topk(
    std::size_t n,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& matvec,
    unsigned k,
    unsigned max_iter = 300,
    double tol = 1e-10,
    const std::vector<std::vector<double>>& deflate = {},
    u64 seed = 12345,
    unsigned threads = 1) {
    max_iter = std::min<unsigned>(max_iter, unsigned(n));
    std::vector<std::vector<double>> V;
    std::vector<double> alpha, beta;
    auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
        // fixed-order chunked reduction: deterministic for any thread count
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
        return s;
    };
    auto project_out = [&](std::vector<double>& x) {
        for (const auto& d : deflate) {
            double c = dot(x, d) / dot(d, d);
            for (std::size_t i = 0; i < n; ++i) x[i] -= c * d[i];
        }
    };
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.unit() - 0.5;
    project_out(v);
    double nv = std::sqrt(dot(v, v));
    for (auto& x : v) x /= nv;

    std::vector<double> w(n);
    LanczosResult res;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (unsigned it = 0; it < max_iter; ++it) {
        V.push_back(v);
        matvec(v, w);
        project_out(w);
        double a = dot(w, v);
        alpha.push_back(a);
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
        if (!beta.empty())
            for (std::size_t i = 0; i < n; ++i) w[i] -= beta.back() * V[V.size() - 2][i];
        // full reorthogonalization (twice is enough)
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : V) {
                double c = dot(w, u);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * u[i];
            }
        double b = std::sqrt(dot(w, w));
        res.iterations = it + 1;
        bool breakdown = b < 1e-13;
        // convergence check every few steps once we have enough Ritz values
        if ((it >= k + 1 && it % 5 == 4) || it + 1 == max_iter || breakdown) {
            std::size_t m = alpha.size();
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (std::size_t i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) { T(i, i + 1) = beta[i]; T(i + 1, i) = beta[i]; }
            }
            es.compute(T);
            unsigned kk = std::min<unsigned>(k, unsigned(m));
            bool ok = true;
            for (unsigned j = 0; j < kk; ++j) {
                // residual bound |beta_m * y_last|
                double y_last = es.eigenvectors()(m - 1, m - 1 - j);
                if (std::abs(b * y_last) > tol * std::max(1.0, std::abs(es.eigenvalues()[m - 1 - j]))) ok = false;
            }
            if ((ok && m >= k) || it + 1 == max_iter || breakdown) {
                res.values.assign(kk, 0.0);
                res.residuals.assign(kk, 0.0);
                // assemble Ritz vectors for true residuals
                for (unsigned j = 0; j < kk; ++j) {
                    double lam = es.eigenvalues()[m - 1 - j];
                    res.values[j] = lam;
                    std::vector<double> x(n, 0.0);
                    for (std::size_t t = 0; t < m; ++t) {
                        double c = es.eigenvectors()(t, m - 1 - j);
                        const auto& vt = V[t];
                        for (std::size_t i = 0; i < n; ++i) x[i] += c * vt[i];
                    }
                    std::vector<double> Ax(n);
                    matvec(x, Ax);
                    project_out(Ax);
                    double num = 0, den = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        double d = Ax[i] - lam * x[i];
                        num += d * d;
                        den += x[i] * x[i];
                    }
                    res.residuals[j] = std::sqrt(num / std::max(den, 1e-300));
                }
                res.converged = ok || breakdown;
                return res;
            }
        }
        if (breakdown) break;
        beta.push_back(b);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
        (void)threads;
    }
    return res;
}

} // namespace hdx
