// Shared test utilities: independent rank oracle, reference graded rings
// (rational-normal-curve section rings and random quotient rings), and a
// basis-change transform for invariance tests.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "bv/ffield.hpp"
#include "bv/koszul.hpp"
#include "bv/lattice.hpp"

namespace bvtest {

inline bv::FMatrix random_matrix(const bv::PrimeField& F, std::size_t r, std::size_t c,
                                 std::mt19937_64& rng) {
    bv::FMatrix M(F, r, c);
    std::uniform_int_distribution<std::uint32_t> dist(0, F.p - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) M.at(i, j) = dist(rng);
    return M;
}

inline bv::FMatrix mat_mul(const bv::FMatrix& A, const bv::FMatrix& B) {
    bv::FMatrix C(A.field, A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            std::uint32_t a = A.at(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                C.at(i, j) = A.field.add(C.at(i, j), A.field.mul(a, B.at(k, j)));
        }
    return C;
}

inline bv::FMatrix transpose(const bv::FMatrix& A) {
    bv::FMatrix T(A.field, A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

/// Rank as the size of the largest nonzero minor, with determinants taken by
/// exact integer (Bareiss) arithmetic and reduced mod p — independent of the
/// elimination code under test.
inline std::size_t rank_by_minors(const bv::FMatrix& A) {
    const std::size_t n = std::min(A.rows, A.cols);
    auto next_subset = [](std::vector<std::size_t>& s, std::size_t limit) {
        const std::size_t k = s.size();
        std::size_t i = k;
        while (i-- > 0) {
            if (s[i] != limit - k + i) {
                ++s[i];
                for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    for (std::size_t k = n; k >= 1; --k) {
        std::vector<std::size_t> rs(k), cs0(k);
        for (std::size_t i = 0; i < k; ++i) rs[i] = i;
        do {
            std::vector<std::size_t> cs = cs0;
            for (std::size_t i = 0; i < k; ++i) cs[i] = i;
            do {
                std::vector<std::vector<bv::bigint>> m(k, std::vector<bv::bigint>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) m[i][j] = A.at(rs[i], cs[j]);
                bv::bigint d = bv::detail::int_det(std::move(m));
                if (d % A.field.p != 0) return k;
            } while (next_subset(cs, A.cols));
        } while (next_subset(rs, A.rows));
    }
    return 0;
}

/// Section ring of O(n) on the projective line, truncated at degree 3:
/// R_q = H^0(O(nq)), multiplication is coefficient convolution.
inline bv::GradedRingData rnc_ring(std::uint32_t p, int n) {
    bv::GradedRingData ring{bv::PrimeField(p), {}, {}};
    auto dim = [n](int q) { return static_cast<std::size_t>(n * q + 1); };
    ring.dims = {1, dim(1), dim(2), dim(3)};
    for (int q = 1; q <= 2; ++q) {
        bv::MulTensor t;
        t.dim_v = dim(1);
        t.dim_rq = dim(q);
        t.dim_rq1 = dim(q + 1);
        t.c.assign(t.dim_v * t.dim_rq * t.dim_rq1, 0);
        for (std::size_t i = 0; i < t.dim_v; ++i)
            for (std::size_t j = 0; j < t.dim_rq; ++j) t.at(i, j, i + j) = 1;
        ring.mu.push_back(t);
    }
    ring.validate();
    return ring;
}

/// Degree-q monomial exponent vectors in n variables, lexicographic.
inline std::vector<std::vector<int>> monomials(int n, int q) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == n - 1) {
            cur[var] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[var] = e;
            rec(var + 1, left - e);
        }
    };
    if (n > 0) rec(0, q);
    return out;
}

/// Quotient of the polynomial ring in n variables by a random ideal
/// generated by `nquad` quadrics, truncated at degree 3. A genuine
/// commutative associative graded ring with R_1 spanned by the variables.
struct QuotientRing {
    bv::GradedRingData ring;
};

inline QuotientRing random_quotient_ring(std::uint32_t p, int n, int nquad,
                                         std::mt19937_64& rng) {
    bv::PrimeField F(p);
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
    auto mons2 = monomials(n, 2);
    auto mons3 = monomials(n, 3);
    std::map<std::vector<int>, std::size_t> idx2, idx3;
    for (std::size_t i = 0; i < mons2.size(); ++i) idx2[mons2[i]] = i;
    for (std::size_t i = 0; i < mons3.size(); ++i) idx3[mons3[i]] = i;

    // random quadric generators
    std::vector<std::vector<std::uint32_t>> quads(nquad,
                                                  std::vector<std::uint32_t>(mons2.size()));
    for (auto& qv : quads)
        for (auto& c : qv) c = dist(rng);

    // reduced row echelon form of a spanning set, plus reduction closure
    struct Rref {
        bv::PrimeField F;
        std::vector<std::vector<std::uint32_t>> rows;
        std::vector<std::size_t> pivots;

        void insert(std::vector<std::uint32_t> v) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::uint32_t c = v[pivots[r]];
                if (c)
                    for (std::size_t j = 0; j < v.size(); ++j)
                        v[j] = F.sub(v[j], F.mul(c, rows[r][j]));
            }
            std::size_t pc = v.size();
            for (std::size_t j = 0; j < v.size(); ++j)
                if (v[j]) { pc = j; break; }
            if (pc == v.size()) return;
            std::uint32_t inv = F.inv(v[pc]);
            for (auto& x : v) x = F.mul(x, inv);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::uint32_t c = rows[r][pc];
                if (c)
                    for (std::size_t j = 0; j < v.size(); ++j)
                        rows[r][j] = F.sub(rows[r][j], F.mul(c, v[j]));
            }
            rows.push_back(std::move(v));
            pivots.push_back(pc);
        }
        std::vector<std::uint32_t> reduce(std::vector<std::uint32_t> v) const {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::uint32_t c = v[pivots[r]];
                if (c)
                    for (std::size_t j = 0; j < v.size(); ++j)
                        v[j] = F.sub(v[j], F.mul(c, rows[r][j]));
            }
            return v;
        }
        std::vector<std::size_t> free_columns(std::size_t width) const {
            std::vector<bool> is_pivot(width, false);
            for (auto pcol : pivots) is_pivot[pcol] = true;
            std::vector<std::size_t> out;
            for (std::size_t j = 0; j < width; ++j)
                if (!is_pivot[j]) out.push_back(j);
            return out;
        }
    };

    Rref i2{F, {}, {}};
    for (const auto& qv : quads) i2.insert(qv);
    Rref i3{F, {}, {}};
    for (const auto& qv : quads)
        for (int v = 0; v < n; ++v) {
            std::vector<std::uint32_t> cubic(mons3.size(), 0);
            for (std::size_t j = 0; j < mons2.size(); ++j) {
                if (!qv[j]) continue;
                auto e = mons2[j];
                ++e[v];
                cubic[idx3.at(e)] = F.add(cubic[idx3.at(e)], qv[j]);
            }
            i3.insert(cubic);
        }

    auto free2 = i2.free_columns(mons2.size());
    auto free3 = i3.free_columns(mons3.size());
    std::map<std::size_t, std::size_t> pos2, pos3;
    for (std::size_t k = 0; k < free2.size(); ++k) pos2[free2[k]] = k;
    for (std::size_t k = 0; k < free3.size(); ++k) pos3[free3[k]] = k;

    bv::GradedRingData ring{F, {1, static_cast<std::size_t>(n), free2.size(), free3.size()}, {}};

    // mu_1: variable * free degree-2 ... wait, mu_1 is V x R_1 -> R_2
    bv::MulTensor t1;
    t1.dim_v = static_cast<std::size_t>(n);
    t1.dim_rq = static_cast<std::size_t>(n);
    t1.dim_rq1 = free2.size();
    t1.c.assign(t1.dim_v * t1.dim_rq * t1.dim_rq1, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<std::uint32_t> v(mons2.size(), 0);
            std::vector<int> e(n, 0);
            ++e[a];
            ++e[b];
            v[idx2.at(e)] = 1;
            auto r = i2.reduce(std::move(v));
            for (std::size_t k = 0; k < free2.size(); ++k) t1.at(a, b, k) = r[free2[k]];
        }
    ring.mu.push_back(t1);

    bv::MulTensor t2;
    t2.dim_v = static_cast<std::size_t>(n);
    t2.dim_rq = free2.size();
    t2.dim_rq1 = free3.size();
    t2.c.assign(t2.dim_v * t2.dim_rq * t2.dim_rq1, 0);
    for (int a = 0; a < n; ++a)
        for (std::size_t j = 0; j < free2.size(); ++j) {
            auto e = mons2[free2[j]];
            ++e[a];
            std::vector<std::uint32_t> v(mons3.size(), 0);
            v[idx3.at(e)] = 1;
            auto r = i3.reduce(std::move(v));
            for (std::size_t k = 0; k < free3.size(); ++k) t2.at(a, j, k) = r[free3[k]];
        }
    ring.mu.push_back(t2);
    ring.validate();
    return {ring};
}

/// Independent differential for the O(n) section ring on the projective
/// line: own subset enumeration, own sign bookkeeping, monomial-shift
/// multiplication. Used as an oracle against the library's construction.
inline bv::FMatrix oracle_rnc_differential(const bv::PrimeField& F, int n, int p, int q) {
    const std::size_t dim_v = static_cast<std::size_t>(n) + 1;  // V = R_1
    const std::size_t dim_rq = static_cast<std::size_t>(n) * q + 1;
    const std::size_t dim_rq1 = static_cast<std::size_t>(n) * (q + 1) + 1;
    std::vector<std::vector<int>> src, dst;
    std::function<void(std::vector<int>&, int, int, std::vector<std::vector<int>>&)> rec =
        [&](std::vector<int>& s, int start, int want, std::vector<std::vector<int>>& out) {
            if (static_cast<int>(s.size()) == want) {
                out.push_back(s);
                return;
            }
            for (int v = start; v < static_cast<int>(dim_v); ++v) {
                s.push_back(v);
                rec(s, v + 1, want, out);
                s.pop_back();
            }
        };
    std::vector<int> scratch;
    rec(scratch, 0, p, src);
    rec(scratch, 0, p - 1, dst);
    std::map<std::vector<int>, std::size_t> dst_idx;
    for (std::size_t r = 0; r < dst.size(); ++r) dst_idx[dst[r]] = r;
    bv::FMatrix M(F, dst.size() * dim_rq1, src.size() * dim_rq);
    for (std::size_t cS = 0; cS < src.size(); ++cS)
        for (int j = 0; j < p; ++j) {
            int gen = src[cS][j];
            std::vector<int> rest = src[cS];
            rest.erase(rest.begin() + j);
            std::size_t rS = dst_idx.at(rest);
            std::uint32_t sign = (j % 2 == 0) ? 1u : F.neg(1u);
            for (std::size_t m = 0; m < dim_rq; ++m) {
                std::size_t target = static_cast<std::size_t>(gen) + m;  // x^gen * x^m
                std::size_t row = rS * dim_rq1 + target, col = cS * dim_rq + m;
                M.at(row, col) = F.add(M.at(row, col), sign);
            }
        }
    return M;
}

/// K_{p,1} of the degree-n rational-normal-curve section ring as
/// dim ker d_{p,1} - rank d_{p+1,0}, with an explicit containment check
/// that the composite of the two maps is zero. Returns SIZE_MAX if the
/// complex property fails.
inline std::size_t oracle_rnc_kp1(std::uint32_t prime, int n, int p) {
    bv::PrimeField F(prime);
    auto d_out = oracle_rnc_differential(F, n, p, 1);
    auto d_in = oracle_rnc_differential(F, n, p + 1, 0);
    auto comp = d_out * d_in;
    for (auto v : comp.data)
        if (v != 0) return SIZE_MAX;
    std::size_t ker = bv::mat_kernel_basis(d_out).size();
    std::size_t im = bv::mat_rank(d_in);
    return ker - im;
}

/// Rewrites the ring data over a new basis of V = R_1 given by an
/// invertible matrix P (new basis vectors in old coordinates).
inline bv::GradedRingData change_v_basis(const bv::GradedRingData& ring,
                                         const std::vector<std::vector<std::uint32_t>>& P) {
    const bv::PrimeField& F = ring.field;
    const std::size_t n = ring.dim_v();
    bv::GradedRingData out = ring;
    // mu_1'(i, j, k) = sum_{a,b} P[a][i] P[b][j] mu_1(a, b, k)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < ring.dims[2]; ++k) {
                std::uint32_t s = 0;
                for (std::size_t a = 0; a < n; ++a) {
                    if (!P[a][i]) continue;
                    for (std::size_t b = 0; b < n; ++b)
                        s = F.add(s, F.mul(F.mul(P[a][i], P[b][j]), ring.mu[0].at(a, b, k)));
                }
                out.mu[0].at(i, j, k) = s;
            }
    // mu_2'(i, s, k) = sum_a P[a][i] mu_2(a, s, k)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < ring.dims[2]; ++s)
            for (std::size_t k = 0; k < ring.dims[3]; ++k) {
                std::uint32_t acc = 0;
                for (std::size_t a = 0; a < n; ++a)
                    acc = F.add(acc, F.mul(P[a][i], ring.mu[1].at(a, s, k)));
                out.mu[1].at(i, s, k) = acc;
            }
    return out;
}

}  // namespace bvtest
