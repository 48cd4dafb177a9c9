#pragma once

#include <gmpxx.h>

#include <vector>

#include "common.hpp"

namespace hdx {

/**
 * Operator algebra of matrices indexed by the ultrametric Delta on the lines
 * of O_r^3: a matrix M whose (v,w)-entry depends only on Delta(v,w) is stored
 * as the vector (M_0, ..., M_r).  Products follow the counting rule
 *
 *   (AB)_delta = sum_{eps,zeta} N^delta_{eps,zeta} A_eps B_zeta,
 *
 * where N^delta_{eps,zeta} is the number of lines u with Delta(v,u)=eps and
 * Delta(u,w)=zeta for any fixed pair at distance delta.  N vanishes unless
 * delta < eps = zeta or max(eps,zeta) = delta.
 */
class DeltaAlgebra {
public:
    DeltaAlgebra(u64 q, unsigned r) : q_(q), r_(r) {
        n_ = (q * q + q + 1) * ipow(q, 2 * (r - 1));
    }

    u64 q() const { return q_; }
    unsigned r() const { return r_; }
    u64 dim() const { return n_; } // |F_r^1|

    /// # of lines at Delta-distance exactly eps from a fixed line.
    mpz_class class_size(unsigned eps) const {
        if (eps == 0) return 1;
        if (eps < r_) return mpz_class(q_ * q_ - 1) * pow2(eps - 1);
        return mpz_class(q_ * q_ + q_) * pow2(r_ - 1);
    }

    /// N^delta_{eps,zeta} (ordered arguments).
    mpz_class N(unsigned d, unsigned eps, unsigned zeta) const {
        unsigned lo = std::min(eps, zeta), hi = std::max(eps, zeta);
        bool support = (eps == zeta && eps > d) || (hi == d);
        if (!support) return 0;
        bool diag = (eps == d && zeta == d);
        if (lo == 0) return 1;
        if (lo < r_) return mpz_class(q_ * q_ - (diag ? 2 : 1)) * pow2(lo - 1);
        return mpz_class(q_ * q_ + i64(q_) - (diag ? 1 : 0)) * pow2(r_ - 1);
    }

    using Mat = std::vector<mpz_class>; // size r+1, index = delta

    Mat identity() const {
        Mat m(r_ + 1, 0);
        m[0] = 1;
        return m;
    }

    Mat all_ones() const { return Mat(r_ + 1, 1); }

    /// The Q operator: Q_0 = (q+1)q^(r-1), Q_delta = q^(r-delta).
    Mat Q() const {
        Mat m(r_ + 1);
        m[0] = mpz_class(q_ + 1) * pow1(r_ - 1);
        for (unsigned d = 1; d <= r_; ++d) m[d] = pow1(r_ - d);
        return m;
    }

    Mat sub_scalar(Mat a, const mpz_class& c) const {
        a[0] -= c;
        return a;
    }

    Mat mul(const Mat& A, const Mat& B) const {
        Mat out(r_ + 1, 0);
        for (unsigned d = 0; d <= r_; ++d) {
            mpz_class acc = 0;
            for (unsigned eps = 0; eps <= r_; ++eps)
                for (unsigned zeta = 0; zeta <= r_; ++zeta) {
                    mpz_class nn = N(d, eps, zeta);
                    if (nn != 0) acc += nn * A[eps] * B[zeta];
                }
            out[d] = acc;
        }
        return out;
    }

    /// Row sum of a Delta-matrix (constant across rows).
    mpz_class row_sum(const Mat& A) const {
        mpz_class s = 0;
        for (unsigned eps = 0; eps <= r_; ++eps) s += class_size(eps) * A[eps];
        return s;
    }

    mpz_class trace(const Mat& A) const { return mpz_class(n_) * A[0]; }

    bool is_constant(const Mat& A) const {
        for (unsigned d = 1; d <= r_; ++d)
            if (A[d] != A[0]) return false;
        return true;
    }

private:
    mpz_class pow1(unsigned e) const { mpz_class b = q_, out; mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e); return out; }
    mpz_class pow2(unsigned e) const { return pow1(2 * e); }

    u64 q_;
    unsigned r_;
    u64 n_;
};

} // namespace hdx
