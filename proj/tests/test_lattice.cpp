#include <random>

#include "bv/lattice.hpp"
#include "catch_amalgamated.hpp"

using bv::Lattice;
using bv::LatticeClass;

TEST_CASE("pairing is symmetric and bilinear", "[lattice]") {
    auto L = bv::named_lattice(bv::LatticeName::omega, 9);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long long> dist(-9, 9);
    for (int t = 0; t < 50; ++t) {
        LatticeClass x(L, {dist(rng), dist(rng), dist(rng)});
        LatticeClass y(L, {dist(rng), dist(rng), dist(rng)});
        LatticeClass z(L, {dist(rng), dist(rng), dist(rng)});
        long long s = dist(rng);
        REQUIRE(bv::pair(x, y) == bv::pair(y, x));
        REQUIRE(bv::pair(x + y * s, z) == bv::pair(x, z) + s * bv::pair(y, z));
    }
}

TEST_CASE("named lattice shapes and discriminants", "[lattice]") {
    for (long long g = 3; g <= 50; ++g) {
        auto U = bv::named_lattice(bv::LatticeName::upsilon, g);
        REQUIRE(U.gram == std::vector<std::vector<long long>>{{2 * g - 2, 0}, {0, -4}});
        REQUIRE(bv::discriminant(U) == -4 * (2 * g - 2));
        REQUIRE(U.is_even());
        auto O = bv::named_lattice(bv::LatticeName::omega, g);
        REQUIRE(bv::discriminant(O) == 4);
        REQUIRE(O.is_even());
    }
    for (long long i = 1; i <= 20; ++i) {
        auto H = bv::named_lattice(bv::LatticeName::hyperelliptic, i);
        REQUIRE(H.gram == std::vector<std::vector<long long>>{
                              {4 * i + 8, 0, 2}, {0, -4, 0}, {2, 0, 0}});
        REQUIRE(H.is_even());
        REQUIRE(bv::discriminant(H) == 16);
    }
    REQUIRE_THROWS_AS(bv::named_lattice(bv::LatticeName::upsilon, 2), bv::ParameterOutOfRange);
    REQUIRE_THROWS_AS(bv::named_lattice("nonesuch", 7), bv::UnknownName);
}

TEST_CASE("square of the polarization class", "[lattice]") {
    // (L + eta)^2 = 2g - 2 - 4 = 2g - 6 in the rank-2 lattice
    for (long long g = 3; g <= 30; ++g) {
        auto U = bv::named_lattice(bv::LatticeName::upsilon, g);
        LatticeClass h(U, {1, 1});
        REQUIRE(bv::pair(h, h) == 2 * g - 6);
    }
}

TEST_CASE("discriminant of an orthogonal direct sum multiplies", "[lattice]") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long long> dist(-5, 5);
    for (int t = 0; t < 30; ++t) {
        long long a = dist(rng), b = dist(rng), c = dist(rng);
        Lattice A({"x", "y"}, {{a, b}, {b, c}});
        long long d = dist(rng);
        Lattice B({"z"}, {{d}});
        Lattice S({"x", "y", "z"}, {{a, b, 0}, {b, c, 0}, {0, 0, d}});
        REQUIRE(bv::discriminant(S) == bv::discriminant(A) * bv::discriminant(B));
    }
}

TEST_CASE("named embeddings preserve the pairing and are primitive", "[lattice]") {
    for (long long g = 3; g <= 25; ++g) {
        auto e = bv::upsilon_to_omega(g);
        REQUIRE(e.preserves_pairing());
        REQUIRE(bv::is_primitive(e));
        // pairing preserved on random classes through apply()
        std::mt19937_64 rng(g);
        std::uniform_int_distribution<long long> dist(-7, 7);
        for (int t = 0; t < 10; ++t) {
            LatticeClass x(e.source, {dist(rng), dist(rng)});
            LatticeClass y(e.source, {dist(rng), dist(rng)});
            REQUIRE(bv::pair(e.apply(x), e.apply(y)) == bv::pair(x, y));
        }
    }
    for (long long i = 1; i <= 10; ++i) {
        auto e = bv::upsilon_to_hyperelliptic(i);
        REQUIRE(e.preserves_pairing());
        REQUIRE(bv::is_primitive(e));
    }
}

TEST_CASE("non-embedding and non-primitive cases are detected", "[lattice]") {
    auto U = bv::named_lattice(bv::LatticeName::upsilon, 7);
    auto O = bv::named_lattice(bv::LatticeName::omega, 7);
    // wrong matrix: does not preserve the pairing
    bv::LatticeEmbedding bad(U, O, {{1, 0}, {0, 0}, {0, 1}});
    REQUIRE_FALSE(bad.preserves_pairing());
    REQUIRE_THROWS_AS(bv::is_primitive(bad), bv::NotAnEmbedding);
    // doubling a basis vector keeps the pairing on a suitable source but is
    // imprimitive: use the index-2 sublattice of Z^1 with gram (4) inside (1)
    Lattice Z1({"e"}, {{1}});
    Lattice Z4({"f"}, {{4}});
    bv::LatticeEmbedding half(Z4, Z1, {{2}});
    REQUIRE(half.preserves_pairing());
    REQUIRE_FALSE(bv::is_primitive(half));
}

TEST_CASE("elementary divisors: chain and known values", "[lattice]") {
    using bv::bigint;
    std::vector<std::vector<bigint>> m = {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}};
    auto d = bv::elementary_divisors(m);
    REQUIRE(d.size() == 3);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) REQUIRE(d[i + 1] % d[i] == 0);
    // d1 = gcd of all entries; product = |det|
    REQUIRE(d[0] == 2);
    REQUIRE(d[0] * d[1] * d[2] ==
            boost::multiprecision::abs(bv::detail::int_det(
                {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}})));
    // diagonal matrix reorders into the divisibility chain
    std::vector<std::vector<bigint>> diag = {{6, 0}, {0, 4}};
    auto dd = bv::elementary_divisors(diag);
    REQUIRE(dd == std::vector<bigint>{2, 12});
}

TEST_CASE("signature by exact diagonalization", "[lattice]") {
    REQUIRE(bv::signature(bv::named_lattice(bv::LatticeName::upsilon, 7)) ==
            std::pair<int, int>(1, 1));
    REQUIRE(bv::signature(bv::named_lattice(bv::LatticeName::omega, 7)) ==
            std::pair<int, int>(1, 2));
    REQUIRE(bv::signature(bv::named_lattice(bv::LatticeName::hyperelliptic, 2)) ==
            std::pair<int, int>(1, 2));
    // hyperbolic-plane block needs the zero-diagonal mixing step
    Lattice hyp({"u", "v"}, {{0, 1}, {1, 0}});
    REQUIRE(bv::signature(hyp) == std::pair<int, int>(1, 1));
    Lattice degen({"x", "y"}, {{1, 1}, {1, 1}});
    REQUIRE_THROWS_AS(bv::signature(degen), bv::DegenerateLattice);
}

TEST_CASE("even unimodular obstruction is the mod-8 signature test", "[lattice]") {
    REQUIRE(bv::even_unimodular_obstruction({1, 2}));
    REQUIRE_FALSE(bv::even_unimodular_obstruction({1, 1}));
    REQUIRE_FALSE(bv::even_unimodular_obstruction({9, 1}));
    REQUIRE(bv::even_unimodular_obstruction({2, 1}));
    REQUIRE_FALSE(bv::even_unimodular_obstruction({0, 8}));
}

TEST_CASE("class arithmetic guards lattice identity", "[lattice]") {
    auto U7 = bv::named_lattice(bv::LatticeName::upsilon, 7);
    auto U9 = bv::named_lattice(bv::LatticeName::upsilon, 9);
    LatticeClass a(U7, {1, 0}), b(U9, {1, 0});
    REQUIRE_THROWS_AS(a + b, bv::LatticeMismatch);
    REQUIRE_THROWS_AS(bv::pair(a, b), bv::LatticeMismatch);
}
