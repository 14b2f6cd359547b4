// Irreducible g-nodal rational paracanonical curve over a prime field: a
// projective line glued to itself at g pairs of points, with a torsion line
// bundle given by gluing scalars at the nodes. Sections of powers of
// H = (dualizing sheaf) (x) (torsion bundle) reduce to plain polynomial
// spaces with one linear node condition each, which makes the section ring
// and its multiplication exactly computable.
#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "bv/counting.hpp"
#include "bv/curves.hpp"
#include "bv/ffield.hpp"
#include "bv/koszul.hpp"
#include "bv/poly.hpp"

namespace bv {

struct TorsionUnavailable : std::runtime_error {
    explicit TorsionUnavailable(const std::string& w) : std::runtime_error(w) {}
};

namespace detail {

/// Quadratic extension F_p(sqrt(ns)) for nodes whose two branches are
/// conjugate; elements are a + b*sqrt(ns).
struct Fp2 {
    std::uint32_t a = 0, b = 0;
};

struct QuadExt {
    PrimeField F;
    std::uint32_t ns;  // a fixed quadratic non-residue

    explicit QuadExt(PrimeField f) : F(f), ns(find_nonresidue(f)) {}

    static std::uint32_t find_nonresidue(const PrimeField& F) {
        for (std::uint32_t c = 2; c < F.p; ++c) {
            // Euler criterion
            if (F.pow(c, (F.p - 1) / 2) == F.p - 1) return c;
        }
        throw std::logic_error("QuadExt: no non-residue found");
    }

    Fp2 make(std::uint32_t a, std::uint32_t b) const { return {a, b}; }
    bool is_zero(Fp2 x) const { return x.a == 0 && x.b == 0; }
    Fp2 add(Fp2 x, Fp2 y) const { return {F.add(x.a, y.a), F.add(x.b, y.b)}; }
    Fp2 sub(Fp2 x, Fp2 y) const { return {F.sub(x.a, y.a), F.sub(x.b, y.b)}; }
    Fp2 mul(Fp2 x, Fp2 y) const {
        return {F.add(F.mul(x.a, y.a), F.mul(ns, F.mul(x.b, y.b))),
                F.add(F.mul(x.a, y.b), F.mul(x.b, y.a))};
    }
    Fp2 scale(Fp2 x, std::uint32_t s) const { return {F.mul(x.a, s), F.mul(x.b, s)}; }
    Fp2 conj(Fp2 x) const { return {x.a, F.neg(x.b)}; }
    std::uint32_t norm(Fp2 x) const {
        return F.sub(F.mul(x.a, x.a), F.mul(ns, F.mul(x.b, x.b)));
    }
    Fp2 inv(Fp2 x) const {
        std::uint32_t n = norm(x);
        if (n == 0) throw std::domain_error("QuadExt::inv: zero");
        return scale(conj(x), F.inv(n));
    }
    Fp2 pow(Fp2 x, std::uint64_t e) const {
        Fp2 r{1, 0};
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
    Fp2 eval_poly(const std::vector<std::uint32_t>& c, Fp2 x) const {
        Fp2 r{0, 0};
        for (std::size_t i = c.size(); i-- > 0;) r = add(mul(r, x), Fp2{c[i], 0});
        return r;
    }
};

}  // namespace detail

/// One node of the rational model. A split node glues two rational branch
/// points a, b with a gluing scalar lambda of exact order `order` in F_p^*
/// (possible when order | p-1). A non-split node glues the conjugate pair
/// alpha, conj(alpha) over F_p(sqrt(ns)) with lambda of exact order `order`
/// in the norm-one subgroup (possible when order | p+1).
struct RationalNode {
    bool split = true;
    std::uint32_t a = 0, b = 0;     // split branch points
    detail::Fp2 alpha;              // non-split branch point
    detail::Fp2 lambda;             // gluing scalar (b-part zero when split)
    long long order = 0;
};

/// Irreducible rational curve with g nodes and the level-l torsion bundle
/// eta given by the node gluing scalars; H = omega_C (x) eta has degree
/// 2g-2 on the normalization.
struct NodalRationalModel {
    PrimeField field;
    long long genus;
    long long level;
    std::uint64_t seed;
    std::vector<RationalNode> nodes;
};

namespace detail {

inline std::uint32_t fp_element_of_order(const PrimeField& F, long long d, std::mt19937_64& rng) {
    if ((F.p - 1) % d != 0) throw TorsionUnavailable("no order-" + std::to_string(d) +
                                                     " scalar in the multiplicative group");
    auto pf = factorize(d);
    std::uniform_int_distribution<std::uint32_t> dist(1, F.p - 1);
    for (int tries = 0; tries < 4096; ++tries) {
        std::uint32_t l = F.pow(dist(rng), (F.p - 1) / static_cast<std::uint64_t>(d));
        bool exact = true;
        for (auto [q, e] : pf) exact = exact && F.pow(l, static_cast<std::uint64_t>(d / q)) != 1;
        if (exact) return l;
    }
    throw TorsionUnavailable("exact-order scalar search failed");
}

inline Fp2 norm_one_element_of_order(const QuadExt& K, long long d, std::mt19937_64& rng) {
    const std::uint64_t p = K.F.p;
    if ((p + 1) % static_cast<std::uint64_t>(d) != 0)
        throw TorsionUnavailable("no order-" + std::to_string(d) + " scalar in the norm-one group");
    auto pf = factorize(d);
    std::uniform_int_distribution<std::uint32_t> dist(0, K.F.p - 1);
    for (int tries = 0; tries < 4096; ++tries) {
        Fp2 g = K.make(dist(rng), dist(rng));
        if (K.is_zero(g)) continue;
        // g^(p-1) has norm one; the norm-one subgroup is cyclic of order p+1
        Fp2 n1 = K.pow(g, p - 1);
        Fp2 l = K.pow(n1, (p + 1) / static_cast<std::uint64_t>(d));
        bool exact = !(l.a == 1 && l.b == 0);
        for (auto [q, e] : pf) {
            Fp2 t = K.pow(l, static_cast<std::uint64_t>(d / q));
            exact = exact && !(t.a == 1 && t.b == 0);
        }
        if (exact) return l;
    }
    throw TorsionUnavailable("exact-order norm-one scalar search failed");
}

}  // namespace detail

/// Builds the g-nodal rational model: distinct branch points and per-node
/// gluing scalars of the requested exact orders. Each order d must divide
/// p-1 (split node) or p+1 (non-split node). Deterministic per seed.
inline NodalRationalModel build_nodal_rational_model(long long genus,
                                                     const std::vector<long long>& orders,
                                                     std::uint32_t p, std::uint64_t seed) {
    if (genus < 3) throw std::invalid_argument("build_nodal_rational_model: genus >= 3");
    if (static_cast<long long>(orders.size()) != genus)
        throw std::invalid_argument("build_nodal_rational_model: need one order per node");
    long long level = 1;
    for (long long d : orders) {
        if (d < 2) throw std::invalid_argument("build_nodal_rational_model: orders >= 2");
        level = std::lcm(level, d);
    }
    PrimeField F(p);
    detail::QuadExt K(F);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
    std::uniform_int_distribution<std::uint32_t> dist_nz(1, p - 1);

    NodalRationalModel model{F, genus, level, seed, {}};
    // branch points, all distinct in F_p(sqrt(ns)); conjugate pairs of
    // non-split nodes are distinct automatically
    std::vector<detail::Fp2> used;
    auto fresh = [&](detail::Fp2 x) {
        for (auto u : used)
            if (K.is_zero(K.sub(u, x))) return false;
        return true;
    };
    for (long long i = 0; i < genus; ++i) {
        const long long d = orders[i];
        RationalNode node;
        node.order = d;
        if ((p - 1) % static_cast<std::uint64_t>(d) == 0) {
            node.split = true;
            node.lambda = K.make(detail::fp_element_of_order(F, d, rng), 0);
            for (int tries = 0;; ++tries) {
                if (tries >= 4096)
                    throw DegenerateConfiguration("build_nodal_rational_model: branch points");
                std::uint32_t a = dist(rng), b = dist(rng);
                if (a == b) continue;
                if (!fresh(K.make(a, 0)) || !fresh(K.make(b, 0))) continue;
                node.a = a;
                node.b = b;
                used.push_back(K.make(a, 0));
                used.push_back(K.make(b, 0));
                break;
            }
        } else if ((p + 1) % static_cast<std::uint64_t>(d) == 0) {
            node.split = false;
            node.lambda = detail::norm_one_element_of_order(K, d, rng);
            for (int tries = 0;; ++tries) {
                if (tries >= 4096)
                    throw DegenerateConfiguration("build_nodal_rational_model: branch points");
                detail::Fp2 alpha = K.make(dist(rng), dist_nz(rng));
                if (!fresh(alpha) || !fresh(K.conj(alpha))) continue;
                node.alpha = alpha;
                used.push_back(alpha);
                used.push_back(K.conj(alpha));
                break;
            }
        } else {
            throw TorsionUnavailable("order " + std::to_string(d) +
                                     " divides neither p-1 nor p+1");
        }
        model.nodes.push_back(node);
    }
    return model;
}

namespace detail {

/// Monic quadratic (split: (x-a)(x-b); non-split: minimal polynomial of
/// alpha) vanishing on the branch points of a node.
inline Poly node_quadratic(const PrimeField& F, const QuadExt& K, const RationalNode& n) {
    if (n.split)
        return Poly(F, {F.mul(n.a, n.b), F.neg(F.add(n.a, n.b)), 1});
    std::uint32_t tr = F.add(n.alpha.a, n.alpha.a);
    return Poly(F, {K.norm(n.alpha), F.neg(tr), 1});
}

}  // namespace detail

/// Basis of H^0(C, qH) for the rational model: polynomials F of degree at
/// most q(2g-2) (the coefficient of (dx)^q over the product of all node
/// quadratics to the q-th power) subject to one gluing condition per node:
///   F(a_i) / G_i(a_i)^q = lambda_i^q F(b_i) / G_i(b_i)^q,
/// where G_i is the product of the other node quadratics. Expected
/// dimensions: g-1 for q = 1 and q(2g-2)-g+1 for q >= 2.
inline SectionBasis global_sections(const NodalRationalModel& model, long long q) {
    if (q < 1 || q > 3) throw std::invalid_argument("global_sections: 1 <= q <= 3");
    const PrimeField F = model.field;
    detail::QuadExt K(F);
    const long long g = model.genus;
    const std::size_t dim = static_cast<std::size_t>(q * (2 * g - 2)) + 1;

    std::vector<std::vector<std::uint32_t>> rows;
    for (long long i = 0; i < g; ++i) {
        const auto& node = model.nodes[i];
        Poly Gi = Poly::constant(F, 1);
        for (long long j = 0; j < g; ++j)
            if (j != i) Gi = Gi * detail::node_quadratic(F, K, model.nodes[j]);
        if (node.split) {
            const std::uint32_t ga = F.pow(Gi.eval(node.a), static_cast<std::uint64_t>(q));
            const std::uint32_t gb = F.pow(Gi.eval(node.b), static_cast<std::uint64_t>(q));
            const std::uint32_t lq = F.pow(node.lambda.a, static_cast<std::uint64_t>(q));
            // row: F(a) gb - lambda^q F(b) ga
            std::vector<std::uint32_t> row(dim);
            std::uint32_t xa = 1, xb = 1;
            const std::uint32_t c = F.mul(lq, ga);
            for (std::size_t k = 0; k < dim; ++k) {
                row[k] = F.sub(F.mul(xa, gb), F.mul(c, xb));
                xa = F.mul(xa, node.a);
                xb = F.mul(xb, node.b);
            }
            rows.push_back(std::move(row));
        } else {
            // one F_p-linear condition: F(alpha) G(conj)^q = lambda^q F(conj) G(alpha)^q;
            // its two components over F_p(sqrt(ns)) are proportional, so
            // emitting both is a rank-1 condition
            detail::Fp2 galpha = K.pow(K.eval_poly(Gi.c, node.alpha), static_cast<std::uint64_t>(q));
            detail::Fp2 gconj = K.conj(galpha);
            detail::Fp2 lq = K.pow(node.lambda, static_cast<std::uint64_t>(q));
            detail::Fp2 c = K.mul(lq, galpha);
            std::vector<std::uint32_t> row0(dim), row1(dim);
            detail::Fp2 xa{1, 0};
            for (std::size_t k = 0; k < dim; ++k) {
                detail::Fp2 val = K.sub(K.mul(xa, gconj), K.mul(c, K.conj(xa)));
                row0[k] = val.a;
                row1[k] = val.b;
                xa = K.mul(xa, node.alpha);
            }
            rows.push_back(std::move(row0));
            rows.push_back(std::move(row1));
        }
    }

    FMatrix match(F, rows.size(), dim);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t k = 0; k < dim; ++k) match.at(r, k) = rows[r][k];
    auto ker = mat_kernel_basis(match);
    const std::size_t expected = q == 1 ? static_cast<std::size_t>(g - 1)
                                        : static_cast<std::size_t>(q * (2 * g - 2) - g + 1);
    if (ker.size() != expected)
        throw DimensionMismatch("global_sections: unexpected section space dimension");

    SectionBasis basis;
    basis.q = q;
    basis.spine_dim = dim;  // single component: everything lives on the line
    basis.tail_dim = 0;
    basis.vectors = std::move(ker);
    return basis;
}

/// Product of sections is plain polynomial multiplication (the gluing
/// conditions multiply), expressed in the degree-(qa+qb) basis.
inline std::vector<std::uint32_t> section_product(const NodalRationalModel& model,
                                                  const SectionBasis& A, std::size_t ia,
                                                  const SectionBasis& B, std::size_t ib) {
    const PrimeField F = model.field;
    const long long qc = A.q + B.q;
    const std::size_t dim = static_cast<std::size_t>(qc * (2 * model.genus - 2)) + 1;
    Poly pa(F, A.vectors[ia]);
    Poly pb(F, B.vectors[ib]);
    Poly pc = pa * pb;
    std::vector<std::uint32_t> out(dim, 0);
    for (std::size_t k = 0; k < pc.c.size(); ++k) out[k] = pc.c[k];
    return out;
}

inline MulTensor multiplication_tensor(const NodalRationalModel& model,
                                       const SectionBasis& v,
                                       const SectionBasis& rq,
                                       const SectionBasis& rq1) {
    if (v.q != 1 || rq1.q != rq.q + 1)
        throw std::invalid_argument("multiplication_tensor: degree mismatch");
    const PrimeField F = model.field;
    MulTensor T;
    T.dim_v = v.dimension();
    T.dim_rq = rq.dimension();
    T.dim_rq1 = rq1.dimension();
    T.c.assign(T.dim_v * T.dim_rq * T.dim_rq1, 0);
    for (std::size_t i = 0; i < T.dim_v; ++i)
        for (std::size_t j = 0; j < T.dim_rq; ++j) {
            auto prod = section_product(model, v, i, rq, j);
            auto coords = express_in_basis(F, prod, rq1.vectors);
            for (std::size_t k = 0; k < T.dim_rq1; ++k) T.at(i, j, k) = coords[k];
        }
    return T;
}

inline GradedRingData ring_from_model(const NodalRationalModel& model) {
    auto r1 = global_sections(model, 1);
    auto r2 = global_sections(model, 2);
    auto r3 = global_sections(model, 3);
    GradedRingData ring{model.field, {}, {}};
    ring.dims = {1, r1.dimension(), r2.dimension(), r3.dimension()};
    ring.mu.push_back(multiplication_tensor(model, r1, r1, r2));
    ring.mu.push_back(multiplication_tensor(model, r1, r2, r3));
    ring.validate();
    return ring;
}

}  // namespace bv
