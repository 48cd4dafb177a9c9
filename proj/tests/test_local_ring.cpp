#include <catch_amalgamated.hpp>

#include "hdx/local_ring.hpp"
#include "hdx/smith.hpp"

using namespace hdx;

TEST_CASE("ring_make basic sizes") {
    auto R1 = LocalRing::zmod(2, 2);
    CHECK(R1.size() == 4);
    CHECK(R1.q() == 2);

    auto R2 = LocalRing::laurent_ring(2, 1, 2);
    CHECK(R2.size() == 4);
    CHECK(R2.q() == 2);

    auto R3 = LocalRing::zmod(5, 1);
    CHECK(R3.size() == 5);
    CHECK(R3.q() == 5);

    CHECK_THROWS(LocalRing::zmod(4, 1));    // 4 not prime
    CHECK_THROWS(LocalRing::parse("zmod:4^1"));
    CHECK(LocalRing::parse("zmod:2^3").size() == 8);
    auto F4 = LocalRing::parse("ff:4^2");
    CHECK(F4.q() == 4);
    CHECK(F4.p() == 2);
    CHECK(F4.e() == 2);
    CHECK(F4.size() == 16);
    // lexicographically-least irreducible over F_2 of degree 2 is x^2+x+1
    CHECK(F4.field_poly() == std::vector<unsigned>{1, 1, 1});
}

TEST_CASE("valuation examples") {
    auto R = LocalRing::zmod(2, 3); // Z/8
    CHECK(R.val(6) == 1);
    CHECK(R.val(0) == 3);
    CHECK(R.val(4) == 2);
    CHECK(R.val(3) == 0);

    auto L = LocalRing::laurent_ring(2, 1, 3); // F_2[t]/(t^3)
    // t^2 + t has valuation 1
    relem x = L.add(L.pi_pow(2), L.pi_pow(1));
    CHECK(L.val(x) == 1);
}

static void check_val_multiplicative(const LocalRing& R) {
    const unsigned r = R.r();
    for (relem x = 0; x < R.size(); ++x)
        for (relem y = 0; y < R.size(); ++y) {
            unsigned lhs = R.val(R.mul(x, y));
            unsigned rhs = std::min(R.val(x) + R.val(y), r);
            REQUIRE(lhs == rhs);
        }
}

TEST_CASE("val(xy) = min(val x + val y, r) exhaustively for small rings") {
    for (auto spec : {"zmod:2^3", "zmod:3^2", "zmod:5^2", "ff:4^2", "ff:2^4", "ff:9^1", "ff:8^2"}) {
        auto R = LocalRing::parse(spec);
        REQUIRE(R.size() <= 256);
        check_val_multiplicative(R);
    }
}

TEST_CASE("units: unit*unit is a unit, inv works exhaustively") {
    for (auto spec : {"zmod:2^3", "zmod:3^2", "ff:4^2"}) {
        auto R = LocalRing::parse(spec);
        for (relem x = 0; x < R.size(); ++x) {
            if (!R.is_unit(x)) continue;
            relem xi = R.inv(x);
            REQUIRE(R.mul(x, xi) == R.one());
            for (relem y = 0; y < R.size(); ++y)
                if (R.is_unit(y)) REQUIRE(R.is_unit(R.mul(x, y)));
        }
    }
}

TEST_CASE("ring laws hold on random samples (distributivity, associativity)") {
    for (auto spec : {"zmod:5^3", "ff:4^3"}) {
        auto R = LocalRing::parse(spec);
        Rng rng(12345);
        for (int t = 0; t < 2000; ++t) {
            relem a = rng.below(R.size()), b = rng.below(R.size()), c = rng.below(R.size());
            REQUIRE(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
            REQUIRE(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
            REQUIRE(R.add(a, R.neg(a)) == 0);
        }
    }
}

TEST_CASE("smith form: identity and diagonal examples") {
    auto R = LocalRing::zmod(2, 2); // Z/4
    auto I = RingMat::identity(3);
    auto s = smith_form(R, I);
    CHECK(s.exponents == std::vector<unsigned>{0, 0, 0});

    RingMat D(3, 3);
    D.at(0, 0) = 2; D.at(1, 1) = 1; D.at(2, 2) = 1;
    auto s2 = smith_form(R, D);
    CHECK(s2.exponents == std::vector<unsigned>{1, 0, 0});

    // single column (2,2,0) over Z/4: exponent (1), so the module is not free
    RingMat C(3, 1);
    C.at(0, 0) = 2; C.at(1, 0) = 2; C.at(2, 0) = 0;
    auto s3 = smith_form(R, C);
    CHECK(s3.exponents == std::vector<unsigned>{1});
    CHECK_FALSE(s3.is_free_submodule(3, R.r()));
    // brute-force oracle: no generator of the cyclic module is unimodular
    bool any_unimodular = false;
    for (relem a = 0; a < 4; ++a) {
        std::array<relem, 3> g = {R.mul(a, 2), R.mul(a, 2), 0};
        bool unim = R.is_unit(g[0]) || R.is_unit(g[1]) || R.is_unit(g[2]);
        any_unimodular |= unim;
    }
    CHECK_FALSE(any_unimodular);
}

TEST_CASE("smith transforms reproduce the diagonal (idempotence)") {
    for (auto spec : {"zmod:2^2", "zmod:3^2", "ff:4^2"}) {
        auto R = LocalRing::parse(spec);
        Rng rng(99);
        for (int t = 0; t < 50; ++t) {
            unsigned rows = 2 + unsigned(rng.below(2)), cols = 2 + unsigned(rng.below(2));
            RingMat M(rows, cols);
            for (auto& x : M.a) x = rng.below(R.size());
            auto s = smith_form(R, M);
            auto UMV = ring_mat_mul(R, ring_mat_mul(R, s.U, M), s.V);
            // must equal the canonical diagonal
            for (unsigned i = 0; i < rows; ++i)
                for (unsigned j = 0; j < cols; ++j) {
                    relem want = (i == j && i < s.exponents.size()) ? R.pi_pow(s.exponents[i]) : 0;
                    REQUIRE(UMV.at(i, j) == want);
                }
            // exponents are non-increasing
            for (size_t i = 1; i < s.exponents.size(); ++i)
                REQUIRE(s.exponents[i - 1] >= s.exponents[i]);
            // applying smith to the diagonal gives the same exponents
            auto s2 = smith_form(R, UMV);
            REQUIRE(s2.exponents == s.exponents);
        }
    }
}

// Fact-level duality at small scale: submodule exponents (m1,m2,m3) imply
// quotient exponents (r-m3, r-m2, r-m1).  Brute force over all submodules of
// O_r^3 for q=2, r<=2 by enumerating generated submodules.
TEST_CASE("duality of submodule and quotient exponents (q=2, r<=2)") {
    for (auto spec : {"zmod:2^1", "zmod:2^2", "ff:2^2"}) {
        auto R = LocalRing::parse(spec);
        const unsigned r = R.r();
        const u64 n = R.size();
        // enumerate distinct submodules as sets of elements, from all generator triples
        std::set<std::set<std::array<relem, 3>>> seen;
        std::vector<std::array<relem, 3>> vecs;
        for (relem a = 0; a < n; ++a)
            for (relem b = 0; b < n; ++b)
                for (relem c = 0; c < n; ++c) vecs.push_back({a, b, c});
        Rng rng(7);
        auto span_of = [&](std::vector<std::array<relem, 3>> gens) {
            std::set<std::array<relem, 3>> S;
            // iterate all coefficient combinations
            std::vector<relem> coef(gens.size(), 0);
            for (;;) {
                std::array<relem, 3> x{0, 0, 0};
                for (size_t i = 0; i < gens.size(); ++i)
                    for (int k = 0; k < 3; ++k)
                        x[k] = R.add(x[k], R.mul(coef[i], gens[i][k]));
                S.insert(x);
                size_t i = 0;
                for (; i < coef.size(); ++i) {
                    if (++coef[i] < n) break;
                    coef[i] = 0;
                }
                if (i == coef.size()) break;
            }
            return S;
        };
        int checked = 0;
        for (int t = 0; t < 300; ++t) {
            std::vector<std::array<relem, 3>> gens;
            unsigned k = 1 + unsigned(rng.below(3));
            for (unsigned i = 0; i < k; ++i) gens.push_back(vecs[rng.below(vecs.size())]);
            auto S = span_of(gens);
            if (!seen.insert(S).second) continue;
            RingMat M(3, unsigned(gens.size()));
            for (unsigned j = 0; j < gens.size(); ++j)
                for (unsigned i = 0; i < 3; ++i) M.at(i, j) = gens[j][i];
            auto ex = smith_form(R, M).submodule_exponents(3, r);
            // quotient O^3/M has exponents (r-m3, r-m2, r-m1); check via size:
            // |M| = q^{sum (r-m_i)} and |quotient| = q^{sum m_i}
            u64 expect_size = 1;
            for (unsigned m : ex) expect_size *= ipow(R.q(), r - m);
            REQUIRE(S.size() == expect_size);
            // verify the quotient exponents by smith of a lifted relation matrix:
            // quotient of O^3 by M is measured through its annihilator structure;
            // size duality above plus exponent reversal on the dual module:
            // dual check: the orthogonal complement under the standard pairing
            std::set<std::array<relem, 3>> dual;
            for (auto& phi : vecs) {
                bool ok = true;
                for (auto& x : S) {
                    relem d = R.add(R.add(R.mul(phi[0], x[0]), R.mul(phi[1], x[1])), R.mul(phi[2], x[2]));
                    if (d != 0) { ok = false; break; }
                }
                if (ok) dual.insert(phi);
            }
            // dual module ~ quotient dual: |dual| = |quotient|
            u64 qsize = 1;
            for (unsigned m : ex) qsize *= ipow(R.q(), m);
            REQUIRE(dual.size() == qsize);
            // smith exponents of the dual are (r-m3, r-m2, r-m1)
            std::vector<std::array<relem, 3>> dgens(dual.begin(), dual.end());
            RingMat DM(3, unsigned(dgens.size()));
            for (unsigned j = 0; j < dgens.size(); ++j)
                for (unsigned i = 0; i < 3; ++i) DM.at(i, j) = dgens[j][i];
            auto dex = smith_form(R, DM).submodule_exponents(3, r);
            std::vector<unsigned> want = {r - ex[2], r - ex[1], r - ex[0]};
            REQUIRE(dex == want);
            ++checked;
        }
        REQUIRE(checked >= 10);
    }
}
