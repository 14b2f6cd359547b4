// The degenerate paracanonical curve over a prime field: a rational spine
// with g elliptic tails glued at nodes, per-component torsion line-bundle
// data, global section spaces of the twisted bundle and its powers, and the
// multiplication tensors of the truncated section ring.
#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "bv/elliptic.hpp"
#include "bv/ffield.hpp"
#include "bv/koszul.hpp"
#include "bv/poly.hpp"

namespace bv {

struct DegenerateConfiguration : std::runtime_error {
    explicit DegenerateConfiguration(const std::string& w) : std::runtime_error(w) {}
};
struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& w) : std::runtime_error(w) {}
};

/// One elliptic tail: the curve, its node on the spine side (spine point u),
/// the node point z on the tail, the torsion point t of exact order d, and
/// the bundle point w = z + t.
struct CurveComponent {
    EllipticCurve curve;
    ECPoint torsion;   // exact order = order
    ECPoint node;      // z, affine
    ECPoint bundle;    // w = z + t, affine
    std::uint32_t spine_point;  // u on the affine chart of the spine
    long long order;
};

/// Tree-like nodal curve Gamma + E_1 + ... + E_g with the twisted bundle H_C
/// of multidegree (g-2 on the spine, 1 on each tail).
struct NodalCurveModel {
    PrimeField field;
    long long genus;
    long long level;
    std::uint64_t seed;
    std::vector<CurveComponent> components;

    long long node_count() const { return genus; }
};

/// Sections of qH_C in concatenated component coordinates:
/// [spine polynomial coefficients (deg <= q(g-2))] then, per tail,
/// [numerator monomial coefficients in L(2q * infinity)], with the implicit
/// denominator (x - x_w)^q on each tail.
struct SectionBasis {
    long long q = 0;
    std::size_t spine_dim = 0;      // q(g-2)+1
    std::size_t tail_dim = 0;       // 2q
    std::vector<std::vector<std::uint32_t>> vectors;

    std::size_t dimension() const { return vectors.size(); }
    std::size_t ambient_dim() const { return vectors.empty() ? 0 : vectors[0].size(); }
};

namespace detail {

/// Monomial index <-> pole order for the tail numerator space L(2q*inf):
/// slot k < q+1 is x^k, slot q+1+k is x^k y (only for q >= 2).
inline std::size_t tail_space_dim(long long q) { return static_cast<std::size_t>(2 * q); }

inline std::pair<Poly, Poly> tail_vector_to_uv(const PrimeField& F,
                                               const std::uint32_t* c, long long q) {
    std::vector<std::uint32_t> uc(static_cast<std::size_t>(q) + 1, 0);
    for (long long k = 0; k <= q; ++k) uc[k] = c[k];
    std::vector<std::uint32_t> vc;
    if (q >= 2) {
        vc.assign(static_cast<std::size_t>(q) - 1, 0);
        for (long long k = 0; k <= q - 2; ++k) vc[k] = c[q + 1 + k];
    }
    return {Poly(F, std::move(uc)), Poly(F, std::move(vc))};
}

inline void tail_uv_to_vector(const Poly& u, const Poly& v, long long q, std::uint32_t* c) {
    if (u.degree() > q || v.degree() > q - 2)
        throw std::logic_error("tail numerator exceeds the degree-q space");
    for (long long k = 0; k <= q; ++k) c[k] = u.coeff(static_cast<std::size_t>(k));
    for (long long k = 0; k + 2 <= q; ++k) c[q + 1 + k] = v.coeff(static_cast<std::size_t>(k));
}

/// Evaluate the tail numerator (u + v y)/(x - x_w)^q at the node z.
inline std::uint32_t tail_eval_at_node(const PrimeField& F, const CurveComponent& comp,
                                       const std::uint32_t* c, long long q) {
    auto [u, v] = tail_vector_to_uv(F, c, q);
    std::uint32_t num = F.add(u.eval(comp.node.x), F.mul(v.eval(comp.node.x), comp.node.y));
    std::uint32_t den = F.pow(F.sub(comp.node.x, comp.bundle.x), static_cast<std::uint64_t>(q));
    return F.mul(num, F.inv(den));
}

}  // namespace detail

/// Builds the tree-like model: distinct spine points, per-tail curves with
/// exact-order torsion and a generic node point. Deterministic per seed.
inline NodalCurveModel build_treelike_model(long long genus,
                                            const std::vector<long long>& orders,
                                            std::uint32_t p, std::uint64_t seed) {
    if (genus < 3) throw std::invalid_argument("build_treelike_model: genus >= 3");
    if (static_cast<long long>(orders.size()) != genus)
        throw std::invalid_argument("build_treelike_model: need one order per component");
    long long level = 1;
    for (long long d : orders) {
        if (d < 2) throw std::invalid_argument("build_treelike_model: orders >= 2");
        level = std::lcm(level, d);
    }
    PrimeField F(p);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);

    // distinct spine points on the affine chart
    std::vector<std::uint32_t> spine;
    while (static_cast<long long>(spine.size()) < genus) {
        std::uint32_t u = dist(rng);
        bool fresh = true;
        for (auto v : spine) fresh = fresh && v != u;
        if (fresh) spine.push_back(u);
    }

    NodalCurveModel model{F, genus, level, seed, {}};
    for (long long i = 0; i < genus; ++i) {
        auto [E, t] = ec_with_torsion(p, orders[i], seed * 1000003ull + std::uint64_t(i));
        ECPoint z, w;
        bool found = false;
        for (int tries = 0; tries < 4096 && !found; ++tries) {
            z = E.random_point(rng);
            if (z.inf) continue;
            w = E.add(z, t);
            if (w.inf || w == z) continue;
            if (w.x == z.x) continue;  // node must avoid the denominator zero
            found = true;
        }
        if (!found) throw DegenerateConfiguration("build_treelike_model: no generic node point");
        model.components.push_back({E, t, z, w, spine[i], orders[i]});
    }
    return model;
}

/// Basis of H^0(C, qH_C), assembled from component Riemann-Roch spaces and
/// the node-matching linear system. Expected dimensions: g-1 for q = 1 and
/// q(2g-2)-g+1 for q >= 2.
inline SectionBasis global_sections(const NodalCurveModel& model, long long q) {
    if (q < 1 || q > 3) throw std::invalid_argument("global_sections: 1 <= q <= 3");
    const PrimeField F = model.field;
    const long long g = model.genus;
    const std::size_t spine_dim = static_cast<std::size_t>(q * (g - 2)) + 1;
    const std::size_t tail_dim = detail::tail_space_dim(q);

    // per-tail Riemann-Roch bases of L(q*w), already presented over the
    // numerator space with denominator (x - x_w)^q
    std::vector<std::vector<std::vector<std::uint32_t>>> tail_bases;
    for (const auto& comp : model.components) {
        DivisorE D;
        D.add(comp.bundle, q);
        auto rr = rr_space(comp.curve, D);
        if (static_cast<long long>(rr.size()) != q)
            throw DimensionMismatch("global_sections: tail Riemann-Roch dimension");
        std::vector<std::vector<std::uint32_t>> coords;
        for (const auto& f : rr) {
            std::vector<std::uint32_t> c(tail_dim, 0);
            detail::tail_uv_to_vector(f.u, f.v, q, c.data());
            coords.push_back(std::move(c));
        }
        tail_bases.push_back(std::move(coords));
    }

    // unknowns: spine coefficients, then q coefficients per tail
    const std::size_t unknowns = spine_dim + static_cast<std::size_t>(g) * static_cast<std::size_t>(q);
    FMatrix match(F, static_cast<std::size_t>(g), unknowns);
    for (long long i = 0; i < g; ++i) {
        const auto& comp = model.components[i];
        // spine value at u_i
        std::uint32_t xu = 1;
        for (std::size_t k = 0; k < spine_dim; ++k) {
            match.at(i, k) = xu;
            xu = F.mul(xu, comp.spine_point);
        }
        // minus tail value at z_i
        for (long long j = 0; j < q; ++j) {
            std::uint32_t val =
                detail::tail_eval_at_node(F, comp, tail_bases[i][j].data(), q);
            match.at(i, spine_dim + i * q + j) = F.neg(val);
        }
    }

    auto ker = mat_kernel_basis(match);
    const std::size_t expected =
        q == 1 ? static_cast<std::size_t>(g - 1)
               : static_cast<std::size_t>(q * (2 * g - 2) - g + 1);
    if (ker.size() != expected)
        throw DimensionMismatch("global_sections: unexpected section space dimension");

    SectionBasis basis;
    basis.q = q;
    basis.spine_dim = spine_dim;
    basis.tail_dim = tail_dim;
    for (const auto& k : ker) {
        std::vector<std::uint32_t> vec(spine_dim + static_cast<std::size_t>(g) * tail_dim, 0);
        for (std::size_t s = 0; s < spine_dim; ++s) vec[s] = k[s];
        for (long long i = 0; i < g; ++i)
            for (long long j = 0; j < q; ++j) {
                std::uint32_t coeff = k[spine_dim + i * q + j];
                if (!coeff) continue;
                for (std::size_t t = 0; t < tail_dim; ++t)
                    vec[spine_dim + i * tail_dim + t] =
                        F.add(vec[spine_dim + i * tail_dim + t],
                              F.mul(coeff, tail_bases[i][j][t]));
            }
        basis.vectors.push_back(std::move(vec));
    }
    return basis;
}

/// Componentwise product of a degree-qa section and a degree-qb section,
/// in the degree-(qa+qb) coordinate space.
inline std::vector<std::uint32_t> section_product(const NodalCurveModel& model,
                                                  const SectionBasis& A, std::size_t ia,
                                                  const SectionBasis& B, std::size_t ib) {
    const PrimeField F = model.field;
    const long long g = model.genus;
    const long long qc = A.q + B.q;
    const std::size_t spine_dim = static_cast<std::size_t>(qc * (g - 2)) + 1;
    const std::size_t tail_dim = detail::tail_space_dim(qc);
    std::vector<std::uint32_t> out(spine_dim + static_cast<std::size_t>(g) * tail_dim, 0);

    const auto& va = A.vectors[ia];
    const auto& vb = B.vectors[ib];
    // spine: polynomial product
    Poly pa(F, std::vector<std::uint32_t>(va.begin(), va.begin() + A.spine_dim));
    Poly pb(F, std::vector<std::uint32_t>(vb.begin(), vb.begin() + B.spine_dim));
    Poly pc = pa * pb;
    if (pc.degree() >= static_cast<long long>(spine_dim))
        throw std::logic_error("section_product: spine degree overflow");
    for (std::size_t k = 0; k < pc.c.size(); ++k) out[k] = pc.c[k];

    for (long long i = 0; i < g; ++i) {
        const auto& E = model.components[i].curve;
        auto [ua, wa] = detail::tail_vector_to_uv(F, va.data() + A.spine_dim + i * A.tail_dim, A.q);
        auto [ub, wb] = detail::tail_vector_to_uv(F, vb.data() + B.spine_dim + i * B.tail_dim, B.q);
        // (ua + wa y)(ub + wb y) with y^2 = x^3 + a x + b
        Poly cubic(F, {E.b, E.a, 0, 1});
        Poly uc = ua * ub + wa * wb * cubic;
        Poly vc = ua * wb + ub * wa;
        detail::tail_uv_to_vector(uc, vc, qc, out.data() + spine_dim + i * tail_dim);
    }
    return out;
}

/// Multiplication tensor of V x R_q -> R_{q+1}: entry (i, j, k) is the
/// coefficient of the k-th degree-(q+1) basis vector in v_i * s_j.
inline MulTensor multiplication_tensor(const NodalCurveModel& model,
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

/// Truncated section ring R = k (+) R_1 (+) R_2 (+) R_3 of the twisted
/// bundle, ready for the syzygy computations.
inline GradedRingData ring_from_model(const NodalCurveModel& model) {
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
