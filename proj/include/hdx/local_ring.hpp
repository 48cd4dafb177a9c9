#pragma once

#include <array>
#include <cassert>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace hdx {

enum class RingKind { padic, laurent };

/// An element of a finite local ring, packed into a machine word.
/// padic:   the canonical residue in [0, p^r).
/// laurent: r base-q digits, digit i = coefficient of t^i (each digit an
///          index into the residue field F_q).
using relem = u64;

/**
 * The finite local ring O_r: either Z/p^r (kind padic) or F_q[t]/(t^r) with
 * q = p^e (kind laurent).  Handles are immutable after construction and all
 * operations are pure, so a ring may be shared freely across threads.
 *
 * Valuations live in [0, r] with val(0) = r; x is a unit iff val(x) = 0.
 */
class LocalRing {
public:
    static LocalRing zmod(u64 p, unsigned r) { return LocalRing(RingKind::padic, p, 1, r); }
    static LocalRing laurent_ring(u64 p, unsigned e, unsigned r) { return LocalRing(RingKind::laurent, p, e, r); }

    /// Parses "zmod:p^r" or "ff:q^r" (q a prime power).
    static LocalRing parse(std::string_view spec) {
        auto colon = spec.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("ring spec: expected kind:base^r");
        std::string kind(spec.substr(0, colon));
        std::string rest(spec.substr(colon + 1));
        auto caret = rest.find('^');
        if (caret == std::string::npos) throw std::invalid_argument("ring spec: expected base^r");
        u64 base = std::stoull(rest.substr(0, caret));
        unsigned r = static_cast<unsigned>(std::stoul(rest.substr(caret + 1)));
        if (kind == "zmod") return zmod(base, r);
        if (kind == "ff") {
            // factor the prime power
            if (base < 2) throw std::invalid_argument("ff: base must be a prime power >= 2");
            u64 p = 2;
            while (base % p != 0) ++p;
            unsigned e = 0;
            u64 b = base;
            while (b > 1) {
                if (b % p != 0) throw std::invalid_argument("ff: base is not a prime power");
                b /= p;
                ++e;
            }
            return laurent_ring(p, e, r);
        }
        throw std::invalid_argument("ring spec: unknown kind '" + kind + "'");
    }

    RingKind kind() const { return kind_; }
    u64 p() const { return p_; }
    unsigned e() const { return e_; }
    unsigned r() const { return r_; }
    u64 q() const { return q_; }
    u64 size() const { return size_; }
    const std::vector<unsigned>& field_poly() const { return f_; }

    std::string spec_string() const {
        std::ostringstream os;
        if (kind_ == RingKind::padic) os << "zmod:" << p_ << "^" << r_;
        else os << "ff:" << q_ << "^" << r_;
        return os.str();
    }

    relem zero() const { return 0; }
    relem one() const { return kind_ == RingKind::padic ? 1 : 1; }

    relem add(relem a, relem b) const {
        if (kind_ == RingKind::padic) return (a + b) % size_;
        relem out = 0;
        for (unsigned i = 0; i < r_; ++i)
            out |= relem(fq_add(digit(a, i), digit(b, i))) << (i * qbits_);
        return out;
    }

    relem neg(relem a) const {
        if (kind_ == RingKind::padic) return a == 0 ? 0 : size_ - a;
        relem out = 0;
        for (unsigned i = 0; i < r_; ++i)
            out |= relem(fq_neg(digit(a, i))) << (i * qbits_);
        return out;
    }

    relem sub(relem a, relem b) const { return add(a, neg(b)); }

    relem mul(relem a, relem b) const {
        if (kind_ == RingKind::padic) {
            if (size_ <= 0xFFFFFFFFULL) return (a * b) % size_;
            return static_cast<relem>((i128(a) * i128(b)) % size_);
        }
        std::array<unsigned, 64> acc{};
        for (unsigned i = 0; i < r_; ++i) {
            unsigned ai = digit(a, i);
            if (!ai) continue;
            for (unsigned j = 0; i + j < r_; ++j) {
                unsigned bj = digit(b, j);
                if (!bj) continue;
                acc[i + j] = fq_add(acc[i + j], fq_mul(ai, bj));
            }
        }
        relem out = 0;
        for (unsigned i = 0; i < r_; ++i) out |= relem(acc[i]) << (i * qbits_);
        return out;
    }

    /// pi-adic valuation: largest k with x in pi^k * O_r; val(0) = r.
    unsigned val(relem x) const {
        if (x == 0) return r_;
        if (kind_ == RingKind::padic) {
            unsigned v = 0;
            while (x % p_ == 0) { x /= p_; ++v; }
            return v;
        }
        unsigned v = 0;
        while (digit(x, v) == 0) ++v;
        return v;
    }

    bool is_unit(relem x) const { return val(x) == 0; }

    /// The uniformizer pi (p, resp. t).
    relem uniformizer() const { return kind_ == RingKind::padic ? p_ % size_ : (r_ >= 1 ? (relem(1) << qbits_) : 0); }

    /// pi^k as a ring element (zero for k >= r).
    relem pi_pow(unsigned k) const {
        if (k >= r_) return 0;
        if (kind_ == RingKind::padic) return ipow(p_, k);
        return relem(1) << (k * qbits_);
    }

    /// Multiplicative inverse of a unit.
    relem inv(relem x) const {
        if (!is_unit(x)) throw std::domain_error("inv: not a unit");
        if (kind_ == RingKind::padic) {
            // extended Euclid on the integer representative
            i64 a = static_cast<i64>(x), m = static_cast<i64>(size_);
            i64 g0 = m, g1 = a, u0 = 0, u1 = 1;
            while (g1 != 0) {
                i64 qq = g0 / g1;
                i64 g2 = g0 - qq * g1, u2 = u0 - qq * u1;
                g0 = g1; g1 = g2;
                u0 = u1; u1 = u2;
            }
            i64 inv = u0 % m;
            if (inv < 0) inv += m;
            return static_cast<relem>(inv);
        }
        // x = c0 (1 + n) with n nilpotent; invert by geometric series.
        unsigned c0 = digit(x, 0);
        relem c0inv = fq_inv(c0);
        relem n = mul(scalar(c0inv), x); // = 1 + nilpotent
        relem m = sub(one(), n);         // nilpotent part negated: n = 1 - m
        relem acc = one(), pw = one();
        for (unsigned k = 1; k < r_; ++k) {
            pw = mul(pw, m);
            acc = add(acc, pw);
        }
        return mul(scalar(c0inv), acc);
    }

    /// Exact division by pi^k (requires val(x) >= k).
    relem shift_down(relem x, unsigned k) const {
        if (x == 0) return 0;
        assert(val(x) >= k);
        if (kind_ == RingKind::padic) return x / ipow(p_, k);
        return x >> (k * qbits_);
    }

    /// Reduction mod pi^k (image of x in O_k, still packed the same way).
    relem reduce(relem x, unsigned k) const {
        if (k >= r_) return x;
        if (kind_ == RingKind::padic) return x % ipow(p_, k);
        relem mask = (k * qbits_ >= 64) ? ~relem(0) : ((relem(1) << (k * qbits_)) - 1);
        return x & mask;
    }

    /// Embeds an integer (padic) -- for laurent, n is taken as an F_q scalar index.
    relem from_int(u64 n) const {
        if (kind_ == RingKind::padic) return n % size_;
        return scalar(static_cast<unsigned>(n % q_));
    }

    relem scalar(unsigned fq_index) const {
        if (kind_ == RingKind::padic) return fq_index % size_;
        return fq_index % q_;
    }

    /// Laurent coefficient list (constant term first); padic gives base-p digits.
    std::vector<unsigned> coeffs(relem x) const {
        std::vector<unsigned> c(r_);
        if (kind_ == RingKind::padic) {
            for (unsigned i = 0; i < r_; ++i) { c[i] = static_cast<unsigned>(x % p_); x /= p_; }
        } else {
            for (unsigned i = 0; i < r_; ++i) c[i] = digit(x, i);
        }
        return c;
    }

    relem from_coeffs(const std::vector<unsigned>& c) const {
        relem x = 0;
        if (kind_ == RingKind::padic) {
            for (unsigned i = r_; i-- > 0;) x = x * p_ + (i < c.size() ? c[i] % p_ : 0);
        } else {
            for (unsigned i = 0; i < r_ && i < c.size(); ++i) x |= relem(c[i] % q_) << (i * qbits_);
        }
        return x;
    }

    // ----- residue field F_q helpers (indices in [0, q)) -----

    unsigned fq_add(unsigned a, unsigned b) const {
        if (e_ == 1) { unsigned s = a + b; return s >= p_ ? s - unsigned(p_) : s; }
        // digitwise mod p
        unsigned out = 0, mul = 1;
        for (unsigned i = 0; i < e_; ++i) {
            unsigned da = (a / powp_[i]) % unsigned(p_), db = (b / powp_[i]) % unsigned(p_);
            out += ((da + db) % unsigned(p_)) * mul;
            mul *= unsigned(p_);
        }
        return out;
    }

    unsigned fq_neg(unsigned a) const {
        if (e_ == 1) return a == 0 ? 0 : unsigned(p_) - a;
        unsigned out = 0, mul = 1;
        for (unsigned i = 0; i < e_; ++i) {
            unsigned da = (a / powp_[i]) % unsigned(p_);
            out += (da == 0 ? 0 : unsigned(p_) - da) * mul;
            mul *= unsigned(p_);
        }
        return out;
    }

    unsigned fq_mul(unsigned a, unsigned b) const {
        if (e_ == 1) return static_cast<unsigned>((u64(a) * b) % p_);
        return mul_table_[a * q_ + b];
    }

    unsigned fq_inv(unsigned a) const {
        if (a == 0) throw std::domain_error("fq_inv(0)");
        if (e_ == 1) {
            // Fermat
            unsigned res = 1, base = a, exp = unsigned(p_) - 2;
            while (exp) {
                if (exp & 1) res = fq_mul(res, base);
                base = fq_mul(base, base);
                exp >>= 1;
            }
            return res;
        }
        return inv_table_[a];
    }

private:
    LocalRing(RingKind kind, u64 p, unsigned e, unsigned r) : kind_(kind), p_(p), e_(e), r_(r) {
        if (!is_prime_u64(p)) throw std::invalid_argument("LocalRing: p must be prime");
        if (e < 1 || r < 1) throw std::invalid_argument("LocalRing: e, r must be >= 1");
        if (kind == RingKind::padic && e != 1) throw std::invalid_argument("LocalRing: padic forces e=1");
        q_ = ipow(p, e);
        size_ = ipow(q_, r);
        if (kind_ == RingKind::laurent) {
            qbits_ = 0;
            while ((u64(1) << qbits_) < q_) ++qbits_;
            if (qbits_ * r_ > 63) throw std::overflow_error("LocalRing: q^r too large to pack");
            powp_.resize(e_);
            powp_[0] = 1;
            for (unsigned i = 1; i < e_; ++i) powp_[i] = powp_[i - 1] * unsigned(p_);
            build_field();
        } else {
            qbits_ = 0;
        }
    }

    unsigned digit(relem x, unsigned i) const { return static_cast<unsigned>((x >> (i * qbits_)) & ((relem(1) << qbits_) - 1)); }

    // F_q = F_p[x]/(f), f the irreducible monic polynomial of degree e with the
    // least coefficient encoding (sum a_i p^i); deterministic, no external tables.
    void build_field() {
        if (e_ == 1) { f_ = {0, 1}; return; }
        auto poly_mod_mul = [&](const std::vector<unsigned>& a, const std::vector<unsigned>& b, const std::vector<unsigned>& mod) {
            std::vector<unsigned> c(a.size() + b.size() - 1, 0);
            for (size_t i = 0; i < a.size(); ++i)
                for (size_t j = 0; j < b.size(); ++j)
                    c[i + j] = (c[i + j] + a[i] * b[j]) % unsigned(p_);
            // reduce by monic mod
            for (size_t i = c.size(); i-- > mod.size() - 1;) {
                unsigned coef = c[i];
                if (!coef) continue;
                for (size_t j = 0; j < mod.size(); ++j) {
                    size_t pos = i - (mod.size() - 1) + j;
                    c[pos] = (c[pos] + unsigned(p_) * unsigned(p_) - coef * mod[j] % unsigned(p_)) % unsigned(p_);
                }
            }
            c.resize(mod.size() - 1);
            return c;
        };
        auto is_irreducible = [&](const std::vector<unsigned>& f) {
            // no monic divisor of degree 1..e/2 (trial division)
            unsigned deg = unsigned(f.size()) - 1;
            std::function<bool(std::vector<unsigned>&, unsigned)> try_div = [&](std::vector<unsigned>& g, unsigned) {
                // polynomial remainder f mod g == 0?
                std::vector<unsigned> rem(f);
                unsigned dg = unsigned(g.size()) - 1;
                for (size_t i = rem.size(); i-- > dg;) {
                    unsigned coef = rem[i];
                    if (!coef) continue;
                    for (size_t j = 0; j < g.size(); ++j) {
                        size_t pos = i - dg + j;
                        rem[pos] = (rem[pos] + unsigned(p_) * unsigned(p_) - coef * g[j] % unsigned(p_)) % unsigned(p_);
                    }
                }
                for (unsigned i = 0; i < dg; ++i)
                    if (rem[i]) return false;
                return true;
            };
            for (unsigned d = 1; 2 * d <= deg; ++d) {
                u64 count = ipow(p_, d);
                for (u64 c = 0; c < count; ++c) {
                    std::vector<unsigned> g(d + 1);
                    u64 cc = c;
                    for (unsigned i = 0; i < d; ++i) { g[i] = unsigned(cc % p_); cc /= p_; }
                    g[d] = 1;
                    if (try_div(g, d)) return false;
                }
            }
            return true;
        };
        u64 count = ipow(p_, e_);
        for (u64 c = 0; c < count; ++c) {
            std::vector<unsigned> f(e_ + 1);
            u64 cc = c;
            for (unsigned i = 0; i < e_; ++i) { f[i] = unsigned(cc % p_); cc /= p_; }
            f[e_] = 1;
            if (is_irreducible(f)) { f_ = f; break; }
        }
        if (f_.empty()) throw std::logic_error("no irreducible polynomial found");
        // element index = sum of digit_i p^i; multiplication via poly mult mod f
        mul_table_.assign(q_ * q_, 0);
        auto unpack = [&](unsigned idx) {
            std::vector<unsigned> a(e_);
            for (unsigned i = 0; i < e_; ++i) { a[i] = idx % unsigned(p_); idx /= unsigned(p_); }
            return a;
        };
        auto pack = [&](const std::vector<unsigned>& a) {
            unsigned idx = 0;
            for (unsigned i = e_; i-- > 0;) idx = idx * unsigned(p_) + a[i];
            return idx;
        };
        for (unsigned a = 0; a < q_; ++a)
            for (unsigned b = 0; b < q_; ++b)
                mul_table_[a * q_ + b] = pack(poly_mod_mul(unpack(a), unpack(b), f_));
        inv_table_.assign(q_, 0);
        for (unsigned a = 1; a < q_; ++a)
            for (unsigned b = 1; b < q_; ++b)
                if (mul_table_[a * q_ + b] == 1) { inv_table_[a] = b; break; }
    }

    RingKind kind_;
    u64 p_;
    unsigned e_, r_;
    u64 q_, size_;
    unsigned qbits_ = 0;
    std::vector<unsigned> f_;
    std::vector<unsigned> powp_;
    std::vector<unsigned> mul_table_;
    std::vector<unsigned> inv_table_;
};

} // namespace hdx
