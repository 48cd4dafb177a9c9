#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

#include "common.hpp"

namespace hdx {

/// Exact element of Q(omega), omega = e^{2 pi i / 3}: a + b*omega with
/// omega^2 = -1 - omega.
struct Eisen {
    mpq_class a, b;
    Eisen() : a(0), b(0) {}
    Eisen(mpq_class x) : a(std::move(x)), b(0) {}
    Eisen(mpq_class x, mpq_class y) : a(std::move(x)), b(std::move(y)) {}

    static Eisen omega_pow(unsigned j) {
        switch (j % 3) {
            case 0: return Eisen(1);
            case 1: return Eisen(0, 1);
            default: return Eisen(-1, -1);
        }
    }

    friend Eisen operator+(const Eisen& x, const Eisen& y) { return {x.a + y.a, x.b + y.b}; }
    friend Eisen operator-(const Eisen& x, const Eisen& y) { return {x.a - y.a, x.b - y.b}; }
    friend Eisen operator*(const Eisen& x, const Eisen& y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    Eisen inverse() const {
        mpq_class n = a * a - a * b + b * b;
        if (n == 0) throw std::domain_error("Eisen: division by zero");
        return {(a - b) / n, -b / n};
    }
    friend Eisen operator/(const Eisen& x, const Eisen& y) { return x * y.inverse(); }
    bool operator==(const Eisen& o) const { return a == o.a && b == o.b; }
    bool is_zero() const { return a == 0 && b == 0; }
};

/**
 * Hall-Littlewood P_{[m,0,0]}(x1,x2,x3;t) by the coset-sum formula
 *   sum_i x_i^m prod_{j != i} (x_i - t x_j)/(x_i - x_j),
 * valid for pairwise distinct x_i (exact field arithmetic).
 */
template <typename F>
F hall_littlewood_m00(unsigned m, const F& x1, const F& x2, const F& x3, const F& t) {
    if (m == 0) return F(mpq_class(1));
    std::array<F, 3> x{x1, x2, x3};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if ((x[i] - x[j]).is_zero()) throw std::domain_error("hall_littlewood_m00: coinciding arguments");
    F acc{mpq_class(0)};
    for (int i = 0; i < 3; ++i) {
        F term{mpq_class(1)};
        for (unsigned k = 0; k < m; ++k) term = term * x[i];
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            term = term * (x[i] - t * x[j]) / (x[i] - x[j]);
        }
        acc = acc + term;
    }
    return acc;
}

// mpq_class lacks is_zero(); adapter for the generic code above.
struct Rat {
    mpq_class v;
    Rat() : v(0) {}
    Rat(mpq_class x) : v(std::move(x)) {}
    friend Rat operator+(const Rat& x, const Rat& y) { return {x.v + y.v}; }
    friend Rat operator-(const Rat& x, const Rat& y) { return {x.v - y.v}; }
    friend Rat operator*(const Rat& x, const Rat& y) { return {x.v * y.v}; }
    friend Rat operator/(const Rat& x, const Rat& y) { return {x.v / y.v}; }
    bool is_zero() const { return v == 0; }
};

namespace detail_hl {

/// Bivariate polynomial over Q: coeff[i][j] * x1^i * x2^j.
using Poly2 = std::vector<std::vector<mpq_class>>;

inline Poly2 p2_const(const mpq_class& c) { return {{c}}; }

inline Poly2 p2_mono(unsigned i, unsigned j, const mpq_class& c) {
    Poly2 p(i + 1, std::vector<mpq_class>(j + 1, 0));
    p[i][j] = c;
    return p;
}

inline Poly2 p2_add(const Poly2& a, const Poly2& b) {
    Poly2 c(std::max(a.size(), b.size()));
    std::size_t cols = 0;
    for (auto& r : a) cols = std::max(cols, r.size());
    for (auto& r : b) cols = std::max(cols, r.size());
    for (auto& r : c) r.assign(cols, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] += a[i][j];
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b[i].size(); ++j) c[i][j] += b[i][j];
    return c;
}

inline Poly2 p2_neg(Poly2 a) {
    for (auto& r : a)
        for (auto& x : r) x = -x;
    return a;
}

inline Poly2 p2_mul(const Poly2& a, const Poly2& b) {
    std::size_t ar = a.size(), br = b.size();
    std::size_t ac = 0, bc = 0;
    for (auto& r : a) ac = std::max(ac, r.size());
    for (auto& r : b) bc = std::max(bc, r.size());
    Poly2 c(ar + br - 1, std::vector<mpq_class>(ac + bc - 1, 0));
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j] == 0) continue;
            for (std::size_t k = 0; k < br; ++k)
                for (std::size_t l = 0; l < b[k].size(); ++l)
                    c[i + k][j + l] += a[i][j] * b[k][l];
        }
    return c;
}

/// Exact division by (x2 - 1); throws if the remainder is nonzero.
inline Poly2 p2_div_x2_minus_1(const Poly2& a) {
    Poly2 q(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        // univariate synthetic division in x2
        const auto& row = a[i];
        if (row.empty()) { q[i] = {}; continue; }
        std::vector<mpq_class> out(row.size() > 0 ? row.size() - 1 : 0, 0);
        mpq_class carry = 0;
        for (std::size_t j = row.size(); j-- > 1;) {
            carry += row[j];
            out[j - 1] = carry;
        }
        carry += row[0];
        if (carry != 0) throw std::domain_error("p2_div_x2_minus_1: nonzero remainder");
        q[i] = std::move(out);
    }
    return q;
}

inline std::vector<mpq_class> p2_eval_x2_1(const Poly2& a) {
    std::vector<mpq_class> out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (auto& c : a[i]) out[i] += c;
    return out;
}

inline std::vector<mpq_class> p1_div_x_minus_1(const std::vector<mpq_class>& a) {
    std::vector<mpq_class> out(a.size() > 0 ? a.size() - 1 : 0, 0);
    mpq_class carry = 0;
    for (std::size_t j = a.size(); j-- > 1;) {
        carry += a[j];
        out[j - 1] = carry;
    }
    carry += (a.empty() ? mpq_class(0) : a[0]);
    if (carry != 0) throw std::domain_error("p1_div_x_minus_1: nonzero remainder");
    return out;
}

inline mpq_class p1_eval_1(const std::vector<mpq_class>& a) {
    mpq_class s = 0;
    for (auto& c : a) s += c;
    return s;
}

} // namespace detail_hl

/**
 * Exact P_{[m,0,0]}(1,1,1;t): substitute x3 = 1 symbolically, combine over
 * the denominator (x1-x2)(x1-1)(x2-1), divide the numerator once by (x2-1),
 * set x2 = 1, divide twice by (x1-1), set x1 = 1.
 */
inline mpq_class hl_specialize_111(unsigned m, const mpq_class& t) {
    if (m == 0) return 1;
    using namespace detail_hl;
    // numerator N(x1,x2) =
    //   x1^m (x1 - t x2)(x1 - t)(x2 - 1)
    // - x2^m (x2 - t x1)(x2 - t)(x1 - 1)
    // + (1 - t x1)(1 - t x2)(x1 - x2)
    Poly2 x1 = p2_mono(1, 0, 1), x2 = p2_mono(0, 1, 1);
    Poly2 one = p2_const(1);
    auto sub = [&](const Poly2& a, const Poly2& b) { return p2_add(a, p2_neg(b)); };
    auto scal = [&](const Poly2& a, const mpq_class& c) {
        Poly2 o = a;
        for (auto& r : o)
            for (auto& x : r) x *= c;
        return o;
    };
    Poly2 x1m = one, x2m = one;
    for (unsigned k = 0; k < m; ++k) {
        x1m = p2_mul(x1m, x1);
        x2m = p2_mul(x2m, x2);
    }
    Poly2 term1 = p2_mul(p2_mul(x1m, sub(x1, scal(x2, t))), p2_mul(sub(x1, p2_const(t)), sub(x2, one)));
    Poly2 term2 = p2_mul(p2_mul(x2m, sub(x2, scal(x1, t))), p2_mul(sub(x2, p2_const(t)), sub(x1, one)));
    Poly2 term3 = p2_mul(p2_mul(sub(one, scal(x1, t)), sub(one, scal(x2, t))), sub(x1, x2));
    Poly2 N = p2_add(sub(term1, term2), term3);
    // l'Hopital-free polynomial limits: N is divisible by (x2-1); the result
    // at x2=1 is divisible by (x1-1)^2
    Poly2 N1 = p2_div_x2_minus_1(N);
    auto U = p2_eval_x2_1(N1);
    auto U1 = p1_div_x_minus_1(U);
    auto U2 = p1_div_x_minus_1(U1);
    return p1_eval_1(U2);
}

/// The proof's closed form for q^m * P_{[m,0,0]}(1,1,1;1/q):
/// (1/2) [ (m^2+3m+2) q^m - 2(m^2-1) q^(m-1) + (m^2-3m+2) q^(m-2) ].
inline mpq_class hl_closed_form(unsigned m, u64 q) {
    mpq_class qm(ipow(q, m));
    mpq_class qm1 = qm / i64(q);
    mpq_class qm2 = qm1 / i64(q);
    i64 M = i64(m);
    mpq_class val = mpq_class(M * M + 3 * M + 2) * qm - 2 * mpq_class(M * M - 1) * qm1 +
                    mpq_class(M * M - 3 * M + 2) * qm2;
    return val / 2;
}

/// Checks q^m * P(1,1,1;1/q) == closed form, exactly.
inline bool hl_closed_form_check(unsigned m, u64 q) {
    mpq_class t(1, long(q));
    mpq_class p = hl_specialize_111(m, t);
    mpq_class lhs = mpq_class(ipow(q, m)) * p;
    return lhs == hl_closed_form(m, q);
}

/// Trivial-eigenvalue specialization: q^m P(omega^j/q, omega^j, omega^j q; 1/q)
/// must equal omega^{jm} (q^2+q+1) q^(2(m-1)), exactly in Q(omega).
inline bool hl_omega_specialization_check(unsigned m, unsigned j, u64 q) {
    Eisen w = Eisen::omega_pow(j);
    mpq_class qq{long(q)};
    Eisen x1 = w * Eisen(mpq_class(1) / qq);
    Eisen x2 = w;
    Eisen x3 = w * Eisen(qq);
    Eisen t{mpq_class(1) / qq};
    Eisen P = hall_littlewood_m00(m, x1, x2, x3, t);
    Eisen lhs = Eisen(mpq_class(ipow(q, m))) * P;
    mpq_class scale = mpq_class(i64(q * q + q + 1));
    if (m >= 1) scale *= mpq_class(ipow(q, 2 * (m - 1)));
    else scale /= mpq_class(i64(q * q));
    Eisen rhs = Eisen::omega_pow((j * m) % 3) * Eisen(scale);
    return lhs == rhs;
}

/// Thm-level bound lambda^(m) <= (m^2+3m+2) q^m - 2(m^2-1) q^(m-1) + (m^2-3m+2) q^(m-2),
/// evaluated as a double (integer for m >= 2).
inline double lambda_m_bound(u64 q, unsigned m) {
    double M = m, Q = double(q);
    return (M * M + 3 * M + 2) * std::pow(Q, double(m)) - 2 * (M * M - 1) * std::pow(Q, double(m) - 1) +
           (M * M - 3 * M + 2) * std::pow(Q, double(m) - 2);
}

inline double lambda_m_bound_normalized(u64 q, unsigned m) {
    double M = m;
    return (M * M + 3 * M + 2) / std::pow(double(q), double(m));
}

} // namespace hdx
