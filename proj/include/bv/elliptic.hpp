// Short-Weierstrass elliptic curves over a prime field: group law, naive
// point counting, exact-order torsion search, and Riemann-Roch spaces of
// divisors computed by pure linear algebra in a pole-bounded monomial space.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "bv/counting.hpp"
#include "bv/ffield.hpp"
#include "bv/poly.hpp"

namespace bv {

struct NoTorsionFound : std::runtime_error {
    explicit NoTorsionFound(const std::string& w) : std::runtime_error(w) {}
};

struct ECPoint {
    bool inf = true;
    std::uint32_t x = 0, y = 0;

    static ECPoint infinity() { return {}; }
    static ECPoint affine(std::uint32_t x, std::uint32_t y) { return {false, x, y}; }
    bool operator==(const ECPoint&) const = default;
};

/// Legendre symbol via Euler's criterion.
inline int legendre(const PrimeField& F, std::uint32_t a) {
    if (a % F.p == 0) return 0;
    return F.pow(a, (F.p - 1) / 2) == 1 ? 1 : -1;
}

/// Square root mod p (Tonelli-Shanks); empty if a is a non-residue.
inline std::optional<std::uint32_t> sqrt_mod(const PrimeField& F, std::uint32_t a) {
    a %= F.p;
    if (a == 0) return 0u;
    if (legendre(F, a) != 1) return std::nullopt;
    if (F.p % 4 == 3) return F.pow(a, (F.p + 1) / 4);
    // write p-1 = q * 2^s with q odd
    std::uint64_t q = F.p - 1;
    unsigned s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    std::uint32_t z = 2;
    while (legendre(F, z) != -1) ++z;
    std::uint32_t m = s, c = F.pow(z, q), t = F.pow(a, q), r = F.pow(a, (q + 1) / 2);
    while (t != 1) {
        std::uint32_t i = 0, tt = t;
        while (tt != 1) { tt = F.mul(tt, tt); ++i; }
        std::uint32_t b = c;
        for (std::uint32_t j = 0; j + i + 1 < m; ++j) b = F.mul(b, b);
        m = i;
        c = F.mul(b, b);
        t = F.mul(t, c);
        r = F.mul(r, b);
    }
    return r;
}

/// y^2 = x^3 + a x + b over F_p, nonsingular.
struct EllipticCurve {
    PrimeField F;
    std::uint32_t a, b;

    EllipticCurve(PrimeField f, std::uint32_t a_, std::uint32_t b_) : F(f), a(a_ % f.p), b(b_ % f.p) {
        // 4a^3 + 27b^2 != 0
        std::uint32_t disc = F.add(F.mul(4, F.mul(a, F.mul(a, a))), F.mul(27, F.mul(b, b)));
        if (disc == 0) throw std::invalid_argument("EllipticCurve: singular cubic");
    }

    std::uint32_t rhs(std::uint32_t x) const {
        return F.add(F.mul(x, F.mul(x, x)), F.add(F.mul(a, x), b));
    }
    bool on_curve(const ECPoint& P) const {
        if (P.inf) return true;
        return F.mul(P.y, P.y) == rhs(P.x);
    }

    ECPoint neg(const ECPoint& P) const {
        if (P.inf) return P;
        return ECPoint::affine(P.x, F.neg(P.y));
    }

    ECPoint add(const ECPoint& P, const ECPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        if (P.x == Q.x && P.y == F.neg(Q.y)) return ECPoint::infinity();
        std::uint32_t lam;
        if (P.x == Q.x && P.y == Q.y) {
            if (P.y == 0) return ECPoint::infinity();
            lam = F.mul(F.add(F.mul(3, F.mul(P.x, P.x)), a), F.inv(F.mul(2, P.y)));
        } else {
            lam = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
        }
        std::uint32_t x3 = F.sub(F.sub(F.mul(lam, lam), P.x), Q.x);
        std::uint32_t y3 = F.sub(F.mul(lam, F.sub(P.x, x3)), P.y);
        return ECPoint::affine(x3, y3);
    }

    ECPoint mul(long long k, ECPoint P) const {
        if (k < 0) { k = -k; P = neg(P); }
        ECPoint r = ECPoint::infinity();
        while (k) {
            if (k & 1) r = add(r, P);
            P = add(P, P);
            k >>= 1;
        }
        return r;
    }

    /// #E(F_p) by summing Legendre symbols; intended for p up to ~10^6.
    std::uint64_t count_points() const {
        std::uint64_t n = F.p + 1;
        long long s = 0;
        for (std::uint32_t x = 0; x < F.p; ++x) s += legendre(F, rhs(x));
        return n + s;
    }

    /// Exact order of P in the group of order n.
    long long order_of(const ECPoint& P, long long n) const {
        long long ord = n;
        for (auto [q, e] : factorize(n))
            for (int j = 0; j < e && ord % q == 0 && mul(ord / q, P).inf; ++j) ord /= q;
        return ord;
    }

    std::optional<ECPoint> lift_x(std::uint32_t x) const {
        auto y = sqrt_mod(F, rhs(x));
        if (!y) return std::nullopt;
        return ECPoint::affine(x, *y);
    }

    /// Deterministic random point from the supplied generator.
    ECPoint random_point(std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::uint32_t> dx(0, F.p - 1);
        for (int tries = 0; tries < 4096; ++tries) {
            auto P = lift_x(dx(rng));
            if (P) {
                if (rng() & 1) return neg(*P);
                return *P;
            }
        }
        throw std::runtime_error("random_point: no point found");
    }
};

/// A curve together with a rational point of exact order d; the search is
/// deterministic for a given seed.
inline std::pair<EllipticCurve, ECPoint> ec_with_torsion(std::uint32_t p, long long d,
                                                         std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("ec_with_torsion: d >= 2");
    PrimeField F(p);
    if (p < 101) throw std::invalid_argument("ec_with_torsion: p >= 101");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
    const int curve_tries = 512;
    for (int t = 0; t < curve_tries; ++t) {
        std::uint32_t a = dist(rng), b = dist(rng);
        std::uint32_t disc = F.add(F.mul(4, F.mul(a, F.mul(a, a))), F.mul(27, F.mul(b, b)));
        if (disc == 0) continue;
        EllipticCurve E(F, a, b);
        std::uint64_t n = E.count_points();
        if (n % d != 0) continue;
        for (int pt = 0; pt < 32; ++pt) {
            ECPoint P = E.random_point(rng);
            ECPoint Q = E.mul(static_cast<long long>(n / d), P);
            if (Q.inf) continue;
            if (E.order_of(Q, d) == d) return {E, Q};
        }
    }
    throw NoTorsionFound("ec_with_torsion: no curve with exact order " + std::to_string(d));
}

/// Divisor on an elliptic curve: finite formal sum of points.
struct DivisorE {
    std::vector<std::pair<ECPoint, long long>> terms;

    void add(const ECPoint& P, long long mult) {
        for (auto& [Q, m] : terms)
            if (Q == P) { m += mult; return; }
        terms.emplace_back(P, mult);
    }
    long long degree() const {
        long long d = 0;
        for (auto& [P, m] : terms) d += m;
        return d;
    }
};

/// Function u(x) + v(x) y over a denominator den(x).
struct ECFunction {
    Poly u, v, den;

    std::uint32_t eval(const EllipticCurve& E, const ECPoint& P) const {
        std::uint32_t d = den.eval(P.x);
        if (d == 0) throw std::domain_error("ECFunction::eval: pole at evaluation point");
        std::uint32_t num = E.F.add(u.eval(P.x), E.F.mul(v.eval(P.x), P.y));
        return E.F.mul(num, E.F.inv(d));
    }
};

namespace detail {

/// Local expansions of x and y at an affine point to `len` terms. Uniformizer
/// is x - x0 when y0 != 0 and y when y0 == 0 (2-torsion).
inline std::pair<Series, Series> local_xy(const EllipticCurve& E, const ECPoint& P,
                                          std::size_t len) {
    const PrimeField F = E.F;
    if (P.inf) throw std::invalid_argument("local_xy: affine point required");
    if (P.y != 0) {
        Series x(F, len);
        x.c[0] = P.x;
        if (len > 1) x.c[1] = 1;
        // Newton for y^2 = x^3 + a x + b starting at y0
        Series c = x.mul(x).mul(x).add(x.scaled(E.a)).add(Series::constant(F, E.b, len));
        Series y = Series::constant(F, P.y, len);
        for (std::size_t it = 0; it < len; ++it)
            y = y.mul(y).add(c).mul(y.scaled(2).inverse());
        return {x, y};
    }
    // t = y; solve x(t) from x^3 + a x + b - t^2 = 0 by Newton, F'(x0) != 0
    Series t(F, len);
    if (len > 1) t.c[1] = 1;
    Series x = Series::constant(F, P.x, len);
    Series t2 = t.mul(t);
    for (std::size_t it = 0; it < len; ++it) {
        Series f = x.mul(x).mul(x).add(x.scaled(E.a)).add(Series::constant(F, E.b, len)).sub(t2);
        Series fp = x.mul(x).scaled(3).add(Series::constant(F, E.a, len));
        x = x.sub(f.mul(fp.inverse()));
    }
    return {x, t};
}

}  // namespace detail

/// Basis of L(D) = { f : div(f) + D >= 0 }. Support of the negative part of
/// D must be affine. The space is cut out inside L(N*infinity) for
/// N = deg at infinity + twice the affine positive degree, by exact
/// order-of-vanishing conditions at the relevant points.
inline std::vector<ECFunction> rr_space(const EllipticCurve& E, const DivisorE& D) {
    const PrimeField F = E.F;
    for (auto& [P, m] : D.terms)
        if (!E.on_curve(P)) throw std::invalid_argument("rr_space: point not on curve");

    long long n_inf = 0;
    long long pos_affine = 0;
    for (auto& [P, m] : D.terms) {
        if (P.inf) {
            n_inf += m;
        } else if (m > 0) {
            pos_affine += m;
        } else if (m < 0) {
            // fine; handled below as extra vanishing
        }
    }
    if (n_inf < 0)
        throw std::invalid_argument("rr_space: negative multiplicity at infinity unsupported");

    // denominator h = prod (x - x_P)^{m_P} over the positive affine part
    Poly h = Poly::constant(F, 1);
    for (auto& [P, m] : D.terms)
        if (!P.inf && m > 0)
            h = h * Poly(F, {F.neg(P.x), 1}).pow(static_cast<unsigned>(m));

    const long long N = n_inf + 2 * pos_affine;
    // monomial basis of L(N*infinity): x^i (2i <= N), x^j y (2j+3 <= N)
    std::vector<std::pair<int, int>> monomials;  // (x-exponent, y-exponent)
    for (long long i = 0; 2 * i <= N; ++i) monomials.emplace_back(int(i), 0);
    for (long long j = 0; 2 * j + 3 <= N; ++j) monomials.emplace_back(int(j), 1);
    const std::size_t dim = monomials.size();

    // required vanishing order per condition point: ord(h) - D-coefficient
    std::vector<std::pair<ECPoint, long long>> conditions;
    auto add_condition_point = [&](const ECPoint& R) {
        for (auto& [Q, k] : conditions)
            if (Q == R) return;
        // ord_R(h): each factor (x - x_P)^m contributes at R
        long long oh = 0;
        for (auto& [P, m] : D.terms) {
            if (P.inf || m <= 0) continue;
            if (P.x != R.x) continue;
            if (P.y == 0) {
                // x - x_P vanishes to order 2 at the 2-torsion point
                oh += (R.y == 0 ? 2 : 0) * m;
            } else {
                // simple zeros at P and its inverse
                oh += (R.y == P.y || R.y == F.neg(P.y)) ? m : 0;
            }
        }
        long long dcoeff = 0;
        for (auto& [P, m] : D.terms)
            if (P == R) dcoeff = m;
        long long required = oh - dcoeff;
        if (required > 0) conditions.emplace_back(R, required);
    };
    for (auto& [P, m] : D.terms) {
        if (P.inf) continue;
        if (m > 0) {
            add_condition_point(P);
            add_condition_point(E.neg(P));
        } else if (m < 0) {
            add_condition_point(P);
        }
    }

    std::size_t total_conditions = 0;
    for (auto& [R, k] : conditions) total_conditions += static_cast<std::size_t>(k);

    FMatrix M(F, total_conditions, dim);
    std::size_t row = 0;
    for (auto& [R, k] : conditions) {
        auto [xs, ys] = detail::local_xy(E, R, static_cast<std::size_t>(k));
        for (std::size_t col = 0; col < dim; ++col) {
            auto [i, j] = monomials[col];
            Series s = xs.pow(static_cast<unsigned>(i));
            if (j) s = s.mul(ys);
            for (long long t = 0; t < k; ++t) M.at(row + t, col) = s.c[t];
        }
        row += static_cast<std::size_t>(k);
    }

    auto ker = mat_kernel_basis(M);
    std::vector<ECFunction> basis;
    for (auto& vec : ker) {
        Poly u(F), v(F);
        for (std::size_t col = 0; col < dim; ++col) {
            if (!vec[col]) continue;
            auto [i, j] = monomials[col];
            Poly mono = Poly::monomial(F, static_cast<std::size_t>(i), vec[col]);
            if (j) v = v + mono;
            else u = u + mono;
        }
        basis.push_back({u, v, h});
    }
    return basis;
}

/// dim L(D); for degree 0 this is 1 exactly when D is principal.
inline std::size_t rr_dim(const EllipticCurve& E, const DivisorE& D) {
    return rr_space(E, D).size();
}

}  // namespace bv
