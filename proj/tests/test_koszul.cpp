#include <map>
#include <random>

#include "bv/koszul.hpp"
#include "catch_amalgamated.hpp"
#include "helpers.hpp"

using bv::GradedRingData;
using bv::PrimeField;

TEST_CASE("syzygies of low-degree rational normal curves match the oracle", "[koszul]") {
    // The homogeneous ideal is generated by the 2x2 minors of a 2xn matrix;
    // the resulting linear-strand dimensions are p * C(n, p+1):
    //   n = 2: (1, 0)   n = 3: (3, 2, 0)   n = 4: (6, 8, 3, 0)
    struct Case {
        int n;
        std::vector<long long> row1;  // K_{p,1} for p = 1..n
    };
    const std::vector<Case> cases = {{2, {1, 0}}, {3, {3, 2, 0}}, {4, {6, 8, 3, 0}}};
    for (const auto& c : cases) {
        auto ring = bvtest::rnc_ring(10007, c.n);
        for (int pp = 1; pp <= c.n; ++pp) {
            long long expected = c.row1[pp - 1];
            REQUIRE(static_cast<long long>(bv::koszul_dim(ring, pp, 1)) == expected);
            REQUIRE(static_cast<long long>(bvtest::oracle_rnc_kp1(10007, c.n, pp)) ==
                    expected);
        }
    }
}

TEST_CASE("K_{0,0} = 1 and K_{p,0} = 0 for p >= 1", "[koszul]") {
    auto ring = bvtest::rnc_ring(10007, 3);
    REQUIRE(bv::koszul_dim(ring, 0, 0) == 1);
    for (int pp = 1; pp <= 4; ++pp) REQUIRE(bv::koszul_dim(ring, pp, 0) == 0);
}

TEST_CASE("d compose d vanishes on random quotient rings", "[koszul]") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 50; ++t) {
        int n = 3 + t % 3;   // 3..5 variables
        int nq = 1 + t % 4;  // 1..4 random quadrics
        auto [ring] = bvtest::random_quotient_ring(101, n, nq, rng);
        for (int q = 0; q <= 1; ++q)
            for (int pp = 1; pp <= n; ++pp) {
                auto a = bv::koszul_differential(ring, pp, q + 1);
                auto b = bv::koszul_differential(ring, pp + 1, q);
                auto c = a * b;
                for (auto v : c.data) REQUIRE(v == 0);
            }
    }
}

TEST_CASE("euler characteristic identities on random quotient rings", "[koszul]") {
    // Alternating sums over the weight-k strand of the Koszul complex:
    //   k = 2: r2 - n r1 + C(n,2) = b_{0,2} - b_{1,1} + b_{2,0}
    //   k = 3: r3 - n r2 + C(n,2) r1 - C(n,3)
    //            = b_{0,3} - b_{1,2} + b_{2,1} - b_{3,0}
    std::mt19937_64 rng(77);
    for (int t = 0; t < 20; ++t) {
        int n = 3 + t % 2;
        int nq = 1 + t % 3;
        auto [ring] = bvtest::random_quotient_ring(10007, n, nq, rng);
        bv::KoszulRankCache cache(ring);
        auto C = [](long long a, long long b) {
            return static_cast<long long>(
                bv::detail::binom_small(static_cast<std::size_t>(a), b));
        };
        const long long r1 = static_cast<long long>(ring.dims[1]);
        const long long r2 = static_cast<long long>(ring.dims[2]);
        const long long r3 = static_cast<long long>(ring.dims[3]);
        const long long b02 = static_cast<long long>(bv::koszul_dim(ring, 0, 2, &cache));
        const long long b11 = static_cast<long long>(bv::koszul_dim(ring, 1, 1, &cache));
        const long long b20 = static_cast<long long>(bv::koszul_dim(ring, 2, 0, &cache));
        REQUIRE(r2 - n * r1 + C(n, 2) == b02 - b11 + b20);
        const long long b03 = static_cast<long long>(bv::koszul_dim(ring, 0, 3, &cache));
        const long long b12 = static_cast<long long>(bv::koszul_dim(ring, 1, 2, &cache));
        const long long b21 = static_cast<long long>(bv::koszul_dim(ring, 2, 1, &cache));
        const long long b30 = static_cast<long long>(bv::koszul_dim(ring, 3, 0, &cache));
        REQUIRE(r3 - n * r2 + C(n, 2) * r1 - C(n, 3) == b03 - b12 + b21 - b30);
    }
}

TEST_CASE("syzygy dimensions are invariant under a change of basis of V", "[koszul]") {
    std::mt19937_64 rng(13);
    PrimeField F(101);
    std::uniform_int_distribution<std::uint32_t> dist(0, 100);
    for (int t = 0; t < 10; ++t) {
        auto [ring] = bvtest::random_quotient_ring(101, 3, 1 + t % 3, rng);
        const std::size_t n = ring.dim_v();
        // random invertible P
        std::vector<std::vector<std::uint32_t>> P;
        while (true) {
            P.assign(n, std::vector<std::uint32_t>(n));
            bv::FMatrix M(F, n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) M.at(i, j) = P[i][j] = dist(rng);
            if (bv::mat_rank(M) == n) break;
        }
        auto ring2 = bvtest::change_v_basis(ring, P);
        for (int q = 0; q <= 2; ++q)
            for (int pp = 0; pp <= static_cast<int>(n); ++pp)
                REQUIRE(bv::koszul_dim(ring, pp, q) == bv::koszul_dim(ring2, pp, q));
    }
}

TEST_CASE("betti_table agrees with cell-by-cell computation and threads", "[koszul]") {
    auto ring = bvtest::rnc_ring(10007, 4);
    auto t1 = bv::betti_table(ring, 4, 1);
    auto t4 = bv::betti_table(ring, 4, 4);
    REQUIRE(t1.entries == t4.entries);
    for (int q = 0; q <= 2; ++q)
        for (int pp = 0; pp <= 4; ++pp)
            REQUIRE(t1.at(pp, q) == static_cast<long long>(bv::koszul_dim(ring, pp, q)));
}

TEST_CASE("naturality check on explicit tables", "[koszul]") {
    bv::BettiTable good;
    good.entries[{0, 1}] = 5;
    good.entries[{0, 2}] = 0;
    good.entries[{1, 1}] = 7;
    good.entries[{1, 2}] = 3;
    good.entries[{2, 1}] = 0;
    good.entries[{2, 2}] = 4;
    REQUIRE(bv::naturality(good));
    bv::BettiTable bad = good;
    bad.entries[{2, 1}] = 1;  // now b_{1,2} and b_{2,1} are both nonzero
    REQUIRE_FALSE(bv::naturality(bad));
    bv::BettiTable holey = good;
    holey.entries[{1, 2}] = std::nullopt;
    REQUIRE_THROWS_AS(bv::naturality(holey), bv::UnknownEntries);
}

TEST_CASE("betti table accessors", "[koszul]") {
    bv::BettiTable t;
    t.entries[{0, 0}] = 1;
    t.entries[{3, 1}] = std::nullopt;
    REQUIRE(t.known(0, 0));
    REQUIRE_FALSE(t.known(3, 1));
    REQUIRE_FALSE(t.known(9, 9));
    REQUIRE(t.at(0, 0) == 1);
    REQUIRE_THROWS_AS(t.at(3, 1), bv::UnknownEntries);
    REQUIRE(t.pmax() == 3);
}

TEST_CASE("degree guards", "[koszul]") {
    auto ring = bvtest::rnc_ring(101, 2);
    REQUIRE_THROWS_AS(bv::koszul_dim(ring, 1, 3), bv::DegreeUnavailable);
    REQUIRE(bv::koszul_dim(ring, 0, 3) == 0);  // surjective onto degree 3
    REQUIRE_THROWS_AS(bv::koszul_differential(ring, 1, 3), bv::DegreeUnavailable);
    REQUIRE_THROWS_AS(bv::koszul_dim(ring, -1, 0), bv::DegreeUnavailable);
}
