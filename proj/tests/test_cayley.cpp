#include <catch_amalgamated.hpp>

#include "hdx/cayley.hpp"

using namespace hdx;

TEST_CASE("gaussian integer utilities") {
    Gint pi{1, 2};
    CHECK(pi.norm() == 5);
    // 2i-1 = i * (2-i) = -conj(1+2i): divisible once by 1+2i? ord checks
    Gint z{-1, 2};
    CHECK(gint_ord(z, pi) == 0);
    CHECK(gint_ord(z, pi.conj()) == 1);
    CHECK(gint_divisible(Gint{-2, 2}, Gint{2, 2}));
    CHECK_FALSE(gint_divisible(Gint{1, 1}, Gint{2, 2}));
    // gcd and unit normalization
    Gint g = gint_gcd(Gint{6, 0}, Gint{4, 2});
    CHECK(g.norm() == 4); // gcd(6, 4+2i) = 2 up to units
    CHECK(gint_unit_normalize(Gint{0, -3}) == Gint{3, 0});
    CHECK(gint_unit_normalize(Gint{-2, 1}) == Gint{1, 2});
}

TEST_CASE("S_5: 31 elements, printed matrices present, pi = 1+2i") {
    auto S = enumerate_sp(5);
    REQUIRE(S.mats.size() == 31);
    CHECK(S.pi == Gint{1, 2});
    // diag(2i-1, 2i-1, -2i-1)
    Gmat m1{};
    m1[0] = Gint{-1, 2};
    m1[4] = Gint{-1, 2};
    m1[8] = Gint{-1, -2};
    CHECK(std::find(S.mats.begin(), S.mats.end(), m1) != S.mats.end());
    // [[1, 1+i, 1+i], [1+i, 1, -1-i], [1+i, -1-i, 1]]
    Gmat m2{};
    m2[0] = Gint{1, 0};  m2[1] = Gint{1, 1};   m2[2] = Gint{1, 1};
    m2[3] = Gint{1, 1};  m2[4] = Gint{1, 0};   m2[5] = Gint{-1, -1};
    m2[6] = Gint{1, 1};  m2[7] = Gint{-1, -1}; m2[8] = Gint{1, 0};
    CHECK(std::find(S.mats.begin(), S.mats.end(), m2) != S.mats.end());
    // every member: s* s = 5 I, ord_pi(det) = 1, diagonal = 1 mod (2+2i)
    for (auto& s : S.mats) {
        Gmat prod = gmat_mul(gmat_conj_transpose(s), s);
        REQUIRE(gmat_is_scalar(prod));
        REQUIRE(prod[0] == Gint{5, 0});
        REQUIRE(gint_ord(gmat_det(s), S.pi) == 1);
        for (int d = 0; d < 3; ++d) REQUIRE(gint_divisible(s[d * 3 + d] - Gint{1, 0}, Gint{2, 2}));
    }
}

TEST_CASE("S_13 has 183 elements") {
    auto S = enumerate_sp(13);
    CHECK(S.pi == Gint{3, 2});
    CHECK(S.mats.size() == 183);
}

TEST_CASE("sigma tables: |Sigma_s| = p^2, p+1 closers, scalar test projective") {
    auto S = enumerate_sp(5);
    build_sigma_tables(S);
    for (u32 i = 0; i < S.mats.size(); ++i) {
        REQUIRE(S.sigma[i].size() == 25);
        REQUIRE(S.closers[i].size() == 6);
    }
    // closers really close: s s' s'' scalar with nonzero c
    for (u32 i = 0; i < 5; ++i)
        for (u32 j : S.closers[i]) {
            Gmat M = gmat_mul(S.mats[i], S.mats[j]);
            bool found = false;
            for (auto& s2 : S.mats) {
                Gmat P = gmat_mul(M, s2);
                if (gmat_is_scalar(P)) {
                    found = true;
                    REQUIRE_FALSE(P[0].is_zero());
                }
            }
            REQUIRE(found);
        }
}

TEST_CASE("power generators: cardinality and collision-freeness") {
    auto S = enumerate_sp(5);
    build_sigma_tables(S);
    auto W1 = power_generators(S, 1);
    CHECK(W1.canon.size() == 31);
    auto W2 = power_generators(S, 2);
    CHECK(W2.canon.size() == 775); // 31 * 25, all distinct (checked internally)
}

TEST_CASE("eps = sqrt(-1): q=5 gives 2; reduction is injective; inverse = adjoint") {
    CHECK(sqrt_minus_one(5) == 2);
    CHECK(sqrt_minus_one(13) == 5);
    auto S = enumerate_sp(5);
    ProjectiveGroup G(13);
    u32 eps = sqrt_minus_one(13);
    std::unordered_set<ProjMat, ProjMatHash> seen;
    for (auto& s : S.mats) {
        ProjMat r = reduce_mod_q(G, s, eps);
        seen.insert(r);
        // s^{-1} == s* projectively
        ProjMat rstar = reduce_mod_q(G, gmat_conj_transpose(s), eps);
        REQUIRE(G.mul(r, rstar) == G.identity());
        REQUIRE(G.inverse(r) == rstar);
    }
    REQUIRE(seen.size() == 31);
}

TEST_CASE("closure machinery sanity: <standard generators> = PSL_3(F_2), order 168") {
    ProjectiveGroup G(2);
    // elementary + cyclic permutation generate SL_3(F_2)
    CayleyClosure C;
    C.p = 0;
    C.q = 2;
    ProjMat A{1, 1, 0, 0, 1, 0, 0, 0, 1};
    ProjMat B{0, 0, 1, 1, 0, 0, 0, 1, 0};
    C.gens = {G.normalize({1, 1, 0, 0, 1, 0, 0, 0, 1}), G.normalize({0, 0, 1, 1, 0, 0, 0, 1, 0})};
    (void)A;
    (void)B;
    C.elements.push_back(G.identity());
    C.index.emplace(C.elements[0], 0);
    for (u32 head = 0; head < C.elements.size(); ++head) {
        ProjMat cur = C.elements[head];
        for (auto& g : C.gens) {
            ProjMat nxt = G.mul(cur, g);
            if (C.index.emplace(nxt, u32(C.elements.size())).second) C.elements.push_back(nxt);
        }
    }
    CHECK(C.elements.size() == 168);
    CHECK(pgl3_order(2) == 168);
    CHECK(pgl3_order(5) == 372000);
}
