#pragma once

#include <gmpxx.h>

#include <vector>

#include "common.hpp"

namespace hdx {

/**
 * Exact rank of an integer matrix over Q by fraction-free (Bareiss) Gaussian
 * elimination over big integers.  Row/column pivoting on any nonzero entry;
 * the division in the Bareiss update is exact by construction.
 */
inline unsigned bareiss_rank(std::vector<mpz_class> a, unsigned rows, unsigned cols) {
    auto at = [&](unsigned i, unsigned j) -> mpz_class& { return a[std::size_t(i) * cols + j]; };
    mpz_class prev = 1;
    unsigned rank = 0;
    for (unsigned k = 0; rank < rows && k < cols; ++k) {
        // find pivot in column-major scan over the remaining block
        unsigned pi = rows, pj = cols;
        for (unsigned j = k; j < cols && pi == rows; ++j)
            for (unsigned i = rank; i < rows; ++i)
                if (at(i, j) != 0) { pi = i; pj = j; break; }
        if (pi == rows) break;
        if (pi != rank)
            for (unsigned j = 0; j < cols; ++j) std::swap(at(rank, j), at(pi, j));
        if (pj != k)
            for (unsigned i = 0; i < rows; ++i) std::swap(at(i, k), at(i, pj));
        const mpz_class piv = at(rank, k);
        for (unsigned i = rank + 1; i < rows; ++i) {
            for (unsigned j = k + 1; j < cols; ++j) {
                mpz_class t = at(i, j) * piv - at(i, k) * at(rank, j);
                mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            at(i, k) = 0;
        }
        prev = piv;
        ++rank;
    }
    return rank;
}

inline unsigned bareiss_rank_i64(const std::vector<i64>& m, unsigned rows, unsigned cols) {
    std::vector<mpz_class> a(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) a[i] = m[i];
    return bareiss_rank(std::move(a), rows, cols);
}

/**
 * Rank of an integer matrix modulo a prime P < 2^31 (so products fit in
 * 64-bit).  rank_p(M) <= rank_Q(M) always; equality certificates are built by
 * callers from dimension counts.
 */
inline unsigned rank_mod_p(const std::vector<i64>& m, unsigned rows, unsigned cols, u64 P) {
    std::vector<u64> a(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        i64 v = m[i] % i64(P);
        if (v < 0) v += i64(P);
        a[i] = u64(v);
    }
    auto at = [&](unsigned i, unsigned j) -> u64& { return a[std::size_t(i) * cols + j]; };
    auto inv_mod = [&](u64 x) {
        // Fermat: P prime
        u64 res = 1, b = x % P, e = P - 2;
        while (e) {
            if (e & 1) res = res * b % P;
            b = b * b % P;
            e >>= 1;
        }
        return res;
    };
    unsigned rank = 0;
    for (unsigned k = 0; rank < rows && k < cols; ++k) {
        unsigned pi = rows;
        for (unsigned i = rank; i < rows; ++i)
            if (at(i, k) != 0) { pi = i; break; }
        if (pi == rows) continue;
        if (pi != rank)
            for (unsigned j = k; j < cols; ++j) std::swap(at(rank, j), at(pi, j));
        u64 inv = inv_mod(at(rank, k));
        for (unsigned i = rank + 1; i < rows; ++i) {
            u64 f = at(i, k);
            if (!f) continue;
            u64 c = f * inv % P;
            for (unsigned j = k; j < cols; ++j)
                at(i, j) = (at(i, j) + (P - c) * at(rank, j)) % P;
        }
        ++rank;
    }
    return rank;
}

} // namespace hdx
