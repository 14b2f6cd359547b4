// Mordell-Weil section arithmetic on the elliptic K3 lattice: section
// classes T_m, intersection identities, the Kummer class relation, bounded
// decomposition searches and the Mukai dimension count.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "bv/counting.hpp"
#include "bv/lattice.hpp"

namespace bv {

struct GenusMismatch : std::runtime_error {
    explicit GenusMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct BoundTooSmall : std::runtime_error {
    explicit BoundTooSmall(const std::string& w) : std::runtime_error(w) {}
};

/// Section class 2m^2 E + Gamma + m eta in the elliptic lattice.
struct SectionClass {
    long long genus;
    long long m;
    LatticeClass cls;
};

inline SectionClass section_class(long long genus, long long m) {
    auto omega = named_lattice(LatticeName::omega, genus);
    return {genus, m, LatticeClass(omega, {2 * m * m, 1, m})};
}

/// Group law of MW(Y_g) on section indices.
inline SectionClass mw_add(const SectionClass& a, const SectionClass& b) {
    if (a.genus != b.genus) throw GenusMismatch("mw_add: different genus");
    return section_class(a.genus, a.m + b.m);
}

inline long long intersect_sections(const SectionClass& a, const SectionClass& b) {
    if (a.genus != b.genus) throw GenusMismatch("intersect_sections: different genus");
    return pair(a.cls, b.cls);
}

/// Expands 2m(m-1) E + (1-m) Gamma + m T_1 in the (E, Gamma, eta) basis;
/// equals the section class T_m.
inline LatticeClass kummer_class(long long genus, long long m) {
    auto omega = named_lattice(LatticeName::omega, genus);
    LatticeClass e(omega, {1, 0, 0}), gamma(omega, {0, 1, 0});
    LatticeClass t1 = section_class(genus, 1).cls;
    return e * (2 * m * (m - 1)) + gamma * (1 - m) + t1 * m;
}

/// Moduli dimension v^2 + 2 = (2g-2) + 2 of the sheaf moduli space.
inline long long mukai_moduli_dim(long long g) {
    if (g < 2) throw std::invalid_argument("mukai_moduli_dim: g >= 2");
    return (2 * g - 2) + 2;
}

/// Exact-order distribution of the 2l^2-2 torsion points on the zero section.
struct TorsionFiberModel {
    long long level;
    std::map<long long, long long> exact_order_counts;  // d -> f(d), d|level, d >= 2
};

inline TorsionFiberModel fiber_torsion_model(long long level) {
    if (level < 2) throw std::invalid_argument("fiber_torsion_model: level >= 2");
    return {level, detail::fiber_order_multiplicities(level)};
}

/// One candidate splitting target = part + residual found by the sieve.
struct Decomposition {
    LatticeClass part;
    LatticeClass residual;
};

namespace detail {

inline void consider(std::vector<Decomposition>& out, const LatticeClass& target,
                     const LatticeClass& nef, const std::vector<long long>& rc) {
    LatticeClass r(target.lattice, rc);
    bool rzero = true, szero = true;
    LatticeClass s = target - r;
    for (auto v : r.coords) rzero = rzero && v == 0;
    for (auto v : s.coords) szero = szero && v == 0;
    if (rzero || szero) return;
    if (pair(r, r) < -2 || pair(s, s) < -2) return;
    if (pair(r, nef) < 0 || pair(s, nef) < 0) return;
    out.push_back({r, s});
}

}  // namespace detail

/// Necessary-condition sieve for a splitting target = R + (target - R): both
/// parts must satisfy R^2 >= -2 and nonnegative pairing against the supplied
/// nef class. An empty result certifies the irreducibility / non-effectivity
/// arguments; a nonempty result is only ever a list of candidates.
///
/// Supported ambient lattices: upsilon (rank 2) and omega (rank 3), with the
/// published Gram matrices. Coefficient ranges are derived from the pairing
/// constraints where the Gram structure pins them; remaining free directions
/// are clipped at `bound`, and a finite derived range wider than `bound`
/// raises BoundTooSmall.
inline std::vector<Decomposition> decomposition_search(const LatticeClass& target,
                                                       const LatticeClass& nef,
                                                       long long bound = 0) {
    if (target.lattice != nef.lattice)
        throw LatticeMismatch("decomposition_search: target/nef lattices differ");
    if (bound <= 0) {
        long long mx = 0;
        for (auto c : target.coords) mx = std::max(mx, std::llabs(c));
        bound = 4 * (mx + 1);
    }
    std::vector<Decomposition> out;
    const auto& g = target.lattice.gram;
    const std::size_t rank = target.lattice.rank();

    if (rank == 2 && g[0][1] == 0 && g[0][0] > 0) {
        // diagonal lattice with a positive square generator (upsilon shape):
        // pairing with nef = n0*L pins the L coefficient of both parts
        if (nef.coords[1] != 0 || nef.coords[0] <= 0)
            throw std::invalid_argument("decomposition_search: expected nef multiple of L");
        long long a_lo = 0, a_hi = target.coords[0];
        if (a_hi < a_lo) std::swap(a_lo, a_hi);
        if (a_hi - a_lo > 2 * bound)
            throw BoundTooSmall("decomposition_search: derived L-range exceeds bound");
        for (long long a = a_lo; a <= a_hi; ++a)
            for (long long b = -bound; b <= bound; ++b)
                detail::consider(out, target, nef, {a, b});
        return out;
    }

    if (rank == 3 && g[0][0] == 0 && g[0][1] == 1) {
        // omega shape, basis (E, Gamma, eta)
        auto sq = [&](long long a, long long b, long long c) {
            return 2 * a * b - 2 * b * b - 4 * c * c;
        };
        auto ceil_div2 = [](long long n, long long d) {
            return n / d + ((n % d != 0) && ((n > 0) == (d > 0)) ? 1 : 0);
        };
        auto floor_div2 = [](long long n, long long d) {
            return n / d - ((n % d != 0) && ((n > 0) != (d > 0)) ? 1 : 0);
        };
        // pairing with nef = (n0, n1, n2) is linear in the coefficients:
        // pair((a,b,c), nef) = n1 a + (n0 - 2 n1) b - 4 n2 c. When n1 > 0
        // the two nonnegativity conditions pin a to a short interval.
        const long long n0 = nef.coords[0], n1 = nef.coords[1], n2 = nef.coords[2];
        for (long long b = -bound; b <= bound; ++b)
            for (long long c = -bound; c <= bound; ++c) {
                // R^2 >= -2 and S^2 >= -2 are linear in a once (b, c) are
                // fixed with b != 0; the nef pairing bounds a when b == 0.
                long long a_lo = -bound, a_hi = bound;
                const long long ta = target.coords[0];
                const long long tb = target.coords[1], tc = target.coords[2];
                const long long sb = tb - b, sc = tc - c;
                if (b > 0 || sb > 0) {
                    if (b > 0) a_lo = std::max(a_lo, ceil_div2(2 * b * b + 4 * c * c - 2, 2 * b));
                    if (b < 0) a_hi = std::min(a_hi, floor_div2(2 * b * b + 4 * c * c - 2, 2 * b));
                    // S^2 = 2(ta-a)sb - 2 sb^2 - 4 sc^2 >= -2
                    if (sb > 0)
                        a_hi = std::min(a_hi, ta - ceil_div2(2 * sb * sb + 4 * sc * sc - 2, 2 * sb));
                    if (sb < 0)
                        a_lo = std::max(a_lo, ta - floor_div2(2 * sb * sb + 4 * sc * sc - 2, 2 * sb));
                } else if (sq(0, b, c) < -2 && sq(0, tb - b, tc - c) < -2) {
                    continue;
                }
                if (n1 > 0) {
                    a_lo = std::max(a_lo, ceil_div2(4 * n2 * c - (n0 - 2 * n1) * b, n1));
                    a_hi = std::min(a_hi,
                                    ta + floor_div2((n0 - 2 * n1) * sb - 4 * n2 * sc, n1));
                }
                for (long long a = a_lo; a <= a_hi; ++a)
                    detail::consider(out, target, nef, {a, b, c});
            }
        return out;
    }
    throw std::invalid_argument("decomposition_search: unsupported lattice shape");
}

}  // namespace bv
