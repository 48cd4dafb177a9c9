#pragma once

#include <algorithm>
#include <vector>

#include "local_ring.hpp"

namespace hdx {

/// Dense matrix of ring elements, row-major.
struct RingMat {
    unsigned rows = 0, cols = 0;
    std::vector<relem> a;

    RingMat() = default;
    RingMat(unsigned r, unsigned c) : rows(r), cols(c), a(std::size_t(r) * c, 0) {}
    relem& at(unsigned i, unsigned j) { return a[std::size_t(i) * cols + j]; }
    relem at(unsigned i, unsigned j) const { return a[std::size_t(i) * cols + j]; }

    static RingMat identity(unsigned n) {
        RingMat m(n, n);
        for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

inline RingMat ring_mat_mul(const LocalRing& R, const RingMat& A, const RingMat& B) {
    RingMat C(A.rows, B.cols);
    for (unsigned i = 0; i < A.rows; ++i)
        for (unsigned k = 0; k < A.cols; ++k) {
            relem aik = A.at(i, k);
            if (aik == 0) continue;
            for (unsigned j = 0; j < B.cols; ++j)
                C.at(i, j) = R.add(C.at(i, j), R.mul(aik, B.at(k, j)));
        }
    return C;
}

/**
 * Smith normal form over the local ring O_r:  U * M * V = diag(pi^m).
 *
 * `exponents` is the non-increasing sequence m_1 >= ... >= m_k
 * (k = min(rows, cols)); a value of r means the diagonal entry is zero.
 * U, V are invertible over O_r.  Pivoting is on minimal valuation with ties
 * broken by lowest row then column index, so the output is canonical.
 */
struct SmithResult {
    std::vector<unsigned> exponents;
    RingMat U, V;
    RingMat diag;

    /// Exponent list padded to `d` entries (a submodule of O_r^d generated by
    /// fewer columns gets trailing exponents r).
    std::vector<unsigned> submodule_exponents(unsigned d, unsigned r) const {
        std::vector<unsigned> ex(exponents);
        while (ex.size() < d) ex.push_back(r);
        std::sort(ex.begin(), ex.end(), std::greater<unsigned>());
        if (ex.size() > d) ex.resize(d);
        return ex;
    }

    /// Free iff every exponent is 0 or r.
    bool is_free_submodule(unsigned d, unsigned r) const {
        for (unsigned m : submodule_exponents(d, r))
            if (m != 0 && m != r) return false;
        return true;
    }

    unsigned rank_free(unsigned d, unsigned r) const {
        unsigned k = 0;
        for (unsigned m : submodule_exponents(d, r))
            if (m == 0) ++k;
        return k;
    }
};

inline SmithResult smith_form(const LocalRing& R, const RingMat& M) {
    const unsigned r = R.r();
    RingMat A = M;
    RingMat U = RingMat::identity(A.rows);
    RingMat V = RingMat::identity(A.cols);
    unsigned k = 0;
    const unsigned kmax = std::min(A.rows, A.cols);
    std::vector<unsigned> exps;

    auto swap_rows = [&](RingMat& X, unsigned i, unsigned j) {
        if (i == j) return;
        for (unsigned c = 0; c < X.cols; ++c) std::swap(X.at(i, c), X.at(j, c));
    };
    auto swap_cols = [&](RingMat& X, unsigned i, unsigned j) {
        if (i == j) return;
        for (unsigned rr = 0; rr < X.rows; ++rr) std::swap(X.at(rr, i), X.at(rr, j));
    };
    auto scale_row = [&](RingMat& X, unsigned i, relem u) {
        for (unsigned c = 0; c < X.cols; ++c) X.at(i, c) = R.mul(X.at(i, c), u);
    };
    auto addmul_row = [&](RingMat& X, unsigned dst, unsigned src, relem c) {
        for (unsigned cc = 0; cc < X.cols; ++cc) X.at(dst, cc) = R.add(X.at(dst, cc), R.mul(c, X.at(src, cc)));
    };
    auto addmul_col = [&](RingMat& X, unsigned dst, unsigned src, relem c) {
        for (unsigned rr = 0; rr < X.rows; ++rr) X.at(rr, dst) = R.add(X.at(rr, dst), R.mul(c, X.at(rr, src)));
    };

    while (k < kmax) {
        // minimal-valuation pivot, ties by lowest row then column
        unsigned best_i = k, best_j = k, best_v = r + 1;
        for (unsigned i = k; i < A.rows; ++i)
            for (unsigned j = k; j < A.cols; ++j) {
                unsigned v = R.val(A.at(i, j));
                if (v < best_v) { best_v = v; best_i = i; best_j = j; }
            }
        if (best_v >= r) break; // remaining block is zero
        swap_rows(A, k, best_i); swap_rows(U, k, best_i);
        swap_cols(A, k, best_j); swap_cols(V, k, best_j);
        // normalize pivot to pi^v: pivot = pi^v * u, multiply row by u^-1
        relem piv = A.at(k, k);
        relem unit = R.shift_down(piv, best_v);
        relem uinv = R.inv(unit);
        scale_row(A, k, uinv); scale_row(U, k, uinv);
        // eliminate column and row (all entries have valuation >= best_v)
        for (unsigned i = k + 1; i < A.rows; ++i) {
            relem x = A.at(i, k);
            if (x == 0) continue;
            relem qout = R.shift_down(x, best_v);
            addmul_row(A, i, k, R.neg(qout));
            addmul_row(U, i, k, R.neg(qout));
        }
        for (unsigned j = k + 1; j < A.cols; ++j) {
            relem x = A.at(k, j);
            if (x == 0) continue;
            relem qout = R.shift_down(x, best_v);
            addmul_col(A, j, k, R.neg(qout));
            addmul_col(V, j, k, R.neg(qout));
        }
        exps.push_back(best_v);
        ++k;
    }
    while (exps.size() < kmax) exps.push_back(r);

    // global-min pivoting yields non-decreasing exponents; reverse to the
    // canonical non-increasing order
    unsigned n = kmax;
    for (unsigned i = 0; i < n / 2; ++i) {
        unsigned j = n - 1 - i;
        swap_rows(A, i, j); swap_rows(U, i, j);
        swap_cols(A, i, j); swap_cols(V, i, j);
        std::swap(exps[i], exps[j]);
    }

    SmithResult out;
    out.exponents = std::move(exps);
    out.U = std::move(U);
    out.V = std::move(V);
    out.diag = std::move(A);
    return out;
}

} // namespace hdx
