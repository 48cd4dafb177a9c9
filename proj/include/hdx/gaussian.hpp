#pragma once

#include <array>
#include <vector>

#include "common.hpp"

namespace hdx {

/// Gaussian integer a + bi.
struct Gint {
    i64 a = 0, b = 0;
    friend Gint operator+(Gint x, Gint y) { return {x.a + y.a, x.b + y.b}; }
    friend Gint operator-(Gint x, Gint y) { return {x.a - y.a, x.b - y.b}; }
    friend Gint operator*(Gint x, Gint y) { return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a}; }
    friend Gint operator-(Gint x) { return {-x.a, -x.b}; }
    bool operator==(const Gint& o) const = default;
    auto operator<=>(const Gint& o) const = default;
    Gint conj() const { return {a, -b}; }
    u64 norm() const { return u64(a * a + b * b); }
    bool is_zero() const { return a == 0 && b == 0; }
};

/// Exact division x / y in Z[i]; returns false when y does not divide x.
inline bool gint_divide(Gint x, Gint y, Gint& out) {
    i64 n = i64(y.norm());
    if (n == 0) return false;
    Gint p = x * y.conj();
    if (p.a % n != 0 || p.b % n != 0) return false;
    out = {p.a / n, p.b / n};
    return true;
}

inline bool gint_divisible(Gint x, Gint y) {
    Gint t;
    return gint_divide(x, y, t);
}

/// ord_pi(x): multiplicity of the prime pi in x (x != 0).
inline unsigned gint_ord(Gint x, Gint pi) {
    unsigned k = 0;
    Gint q;
    while (gint_divide(x, pi, q)) {
        x = q;
        ++k;
    }
    return k;
}

/// gcd in Z[i] (Euclidean, unit-normalized to the first quadrant).
inline Gint gint_gcd(Gint x, Gint y) {
    auto round_div = [](Gint a, Gint b) {
        i64 n = i64(b.norm());
        Gint p = a * b.conj();
        auto rnd = [&](i64 v) {
            // round to nearest integer of v / n
            return (2 * v + (v >= 0 ? n : -n)) / (2 * n);
        };
        return Gint{rnd(p.a), rnd(p.b)};
    };
    while (!y.is_zero()) {
        Gint q = round_div(x, y);
        Gint r = x - q * y;
        x = y;
        y = r;
    }
    return x;
}

/// Unit-normalize z (multiply by i^k) so that Re > 0, Im >= 0; zero maps to zero.
inline Gint gint_unit_normalize(Gint z) {
    if (z.is_zero()) return z;
    for (int k = 0; k < 4; ++k) {
        if (z.a > 0 && z.b >= 0) return z;
        z = Gint{-z.b, z.a}; // multiply by i
    }
    return z;
}

/// 3x3 matrix over Z[i], row-major.
using Gmat = std::array<Gint, 9>;

inline Gmat gmat_mul(const Gmat& x, const Gmat& y) {
    Gmat z{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            Gint v = x[i * 3 + k];
            if (v.is_zero()) continue;
            for (int j = 0; j < 3; ++j) z[i * 3 + j] = z[i * 3 + j] + v * y[k * 3 + j];
        }
    return z;
}

inline Gmat gmat_conj_transpose(const Gmat& x) {
    Gmat z{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) z[i * 3 + j] = x[j * 3 + i].conj();
    return z;
}

inline Gint gmat_det(const Gmat& m) {
    auto at = [&](int i, int j) { return m[i * 3 + j]; };
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

inline bool gmat_is_scalar(const Gmat& m) {
    if (!(m[0] == m[4] && m[4] == m[8]) || m[0].is_zero()) return false;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && !m[i * 3 + j].is_zero()) return false;
    return true;
}

/// Projective canonical form over Z[i]: divide by the gcd content, then
/// unit-normalize so the first nonzero entry has Re > 0, Im >= 0.
inline Gmat gmat_projective_canonical(const Gmat& m) {
    Gint g{0, 0};
    for (auto& e : m)
        if (!e.is_zero()) g = g.is_zero() ? e : gint_gcd(g, e);
    Gmat out = m;
    if (!g.is_zero()) {
        for (auto& e : out) {
            Gint q;
            bool ok = gint_divide(e, g, q);
            if (!ok) throw std::logic_error("gmat_projective_canonical: content division failed");
            e = q;
        }
    }
    // unit-normalize by the first nonzero entry
    for (auto& e : out) {
        if (e.is_zero()) continue;
        Gint z = e;
        int k = 0;
        Gint zz = z;
        while (!(zz.a > 0 && zz.b >= 0) && k < 4) {
            zz = Gint{-zz.b, zz.a};
            ++k;
        }
        for (int t = 0; t < k; ++t)
            for (auto& x : out) x = Gint{-x.b, x.a};
        break;
    }
    return out;
}

struct GmatHash {
    std::size_t operator()(const Gmat& m) const {
        u64 h = 0x2545F4914F6CDD1DULL;
        for (auto& e : m) {
            h = mix64(h ^ u64(e.a));
            h = mix64(h ^ u64(e.b));
        }
        return h;
    }
};

} // namespace hdx
