// Koszul differentials of a truncated graded ring generated in degree one,
// syzygy space dimensions and Betti tables, and the naturality test.
#pragma once

#include <atomic>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bv/ffield.hpp"

namespace bv {

struct DegreeUnavailable : std::runtime_error {
    explicit DegreeUnavailable(const std::string& w) : std::runtime_error(w) {}
};
struct UnknownEntries : std::runtime_error {
    explicit UnknownEntries(const std::string& w) : std::runtime_error(w) {}
};

/// Multiplication tensor V x R_q -> R_{q+1} as a flat coefficient array.
struct MulTensor {
    std::size_t dim_v = 0, dim_rq = 0, dim_rq1 = 0;
    std::vector<std::uint32_t> c;

    std::uint32_t at(std::size_t i, std::size_t j, std::size_t k) const {
        return c[(i * dim_rq + j) * dim_rq1 + k];
    }
    std::uint32_t& at(std::size_t i, std::size_t j, std::size_t k) {
        return c[(i * dim_rq + j) * dim_rq1 + k];
    }
};

/// Truncated graded ring data: R_0 = k, V = R_1, multiplication tensors
/// mu_q : V x R_q -> R_{q+1} for the available degrees.
struct GradedRingData {
    PrimeField field;
    std::vector<std::size_t> dims;   // dims[q] = dim R_q, q = 0..qmax
    std::vector<MulTensor> mu;       // mu[q] : V x R_q -> R_{q+1}, q = 1..qmax-1

    std::size_t dim_v() const { return dims.at(1); }
    std::size_t qmax() const { return dims.size() - 1; }

    void validate() const {
        if (dims.empty() || dims[0] != 1)
            throw std::invalid_argument("GradedRingData: R_0 must be one-dimensional");
        if (mu.size() + 2 != dims.size())
            throw std::invalid_argument("GradedRingData: tensor count");
        for (std::size_t q = 1; q + 1 <= qmax(); ++q) {
            const auto& t = mu[q - 1];
            if (t.dim_v != dim_v() || t.dim_rq != dims[q] || t.dim_rq1 != dims[q + 1])
                throw std::invalid_argument("GradedRingData: tensor dimensions");
        }
    }
};

namespace detail {

inline std::vector<std::vector<int>> subsets_lex(int n, int p) {
    std::vector<std::vector<int>> out;
    if (p < 0 || p > n) return out;
    std::vector<int> s(p);
    for (int i = 0; i < p; ++i) s[i] = i;
    while (true) {
        out.push_back(s);
        int i = p - 1;
        while (i >= 0 && s[i] == n - p + i) --i;
        if (i < 0) break;
        ++s[i];
        for (int j = i + 1; j < p; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

inline std::uint64_t subset_key(const std::vector<int>& s) {
    std::uint64_t k = 0;
    for (int i : s) k |= (1ull << i);
    return k;
}

}  // namespace detail

/// Matrix of d_{p,q} : Wedge^p V (x) R_q -> Wedge^{p-1} V (x) R_{q+1},
/// d(v_{i1} ^ ... ^ v_{ip} (x) s) = sum_j (-1)^{j+1} (drop i_j) (x) v_{ij} s,
/// over lexicographic bases of the exterior powers. Weight q = 0 uses the
/// canonical identification mu_0(v, 1) = v.
inline FMatrix koszul_differential(const GradedRingData& ring, int p, int q) {
    ring.validate();
    const int n = static_cast<int>(ring.dim_v());
    if (q < 0 || static_cast<std::size_t>(q + 1) > ring.qmax())
        throw DegreeUnavailable("koszul_differential: R_{q+1} unavailable");
    if (p < 0 || p > n + 1)
        throw DegreeUnavailable("koszul_differential: p out of range");
    const std::size_t dim_rq = ring.dims[q];
    const std::size_t dim_rq1 = ring.dims[q + 1];
    auto src = detail::subsets_lex(n, p);
    auto dst = detail::subsets_lex(n, p - 1);
    std::map<std::uint64_t, std::size_t> dst_index;
    for (std::size_t r = 0; r < dst.size(); ++r) dst_index[detail::subset_key(dst[r])] = r;

    FMatrix M(ring.field, dst.size() * dim_rq1, src.size() * dim_rq);
    const PrimeField& F = ring.field;
    for (std::size_t cS = 0; cS < src.size(); ++cS) {
        const auto& S = src[cS];
        for (int j = 0; j < p; ++j) {
            int gen = S[j];
            std::vector<int> rest;
            rest.reserve(p - 1);
            for (int t = 0; t < p; ++t)
                if (t != j) rest.push_back(S[t]);
            std::size_t rS = dst_index.at(detail::subset_key(rest));
            const bool positive = (j % 2 == 0);  // sign (-1)^{(j+1)+1} for j 0-based
            for (std::size_t s = 0; s < dim_rq; ++s) {
                const std::size_t col = cS * dim_rq + s;
                if (q == 0) {
                    // mu_0(v_gen, 1) = v_gen in R_1
                    std::uint32_t val = positive ? 1u : F.neg(1u);
                    const std::size_t row = rS * dim_rq1 + static_cast<std::size_t>(gen);
                    M.at(row, col) = F.add(M.at(row, col), val);
                } else {
                    const auto& t = ring.mu[q - 1];
                    for (std::size_t k = 0; k < dim_rq1; ++k) {
                        std::uint32_t v = t.at(gen, s, k);
                        if (!v) continue;
                        if (!positive) v = F.neg(v);
                        const std::size_t row = rS * dim_rq1 + k;
                        M.at(row, col) = F.add(M.at(row, col), v);
                    }
                }
            }
        }
    }
    return M;
}

namespace detail {

inline std::size_t binom_small(std::size_t n, long long k) {
    if (k < 0 || static_cast<std::size_t>(k) > n) return 0;
    std::size_t r = 1;
    for (long long j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace detail

/// Cache of differential ranks keyed by (p, q).
struct KoszulRankCache {
    const GradedRingData& ring;
    std::map<std::pair<int, int>, std::size_t> ranks;

    explicit KoszulRankCache(const GradedRingData& r) : ring(r) {}

    std::size_t rank(int p, int q) {
        auto key = std::make_pair(p, q);
        auto it = ranks.find(key);
        if (it != ranks.end()) return it->second;
        const int n = static_cast<int>(ring.dim_v());
        std::size_t r = 0;
        if (p >= 1 && p <= n && q >= 0 && static_cast<std::size_t>(q + 1) <= ring.qmax())
            r = mat_rank(koszul_differential(ring, p, q));
        return ranks[key] = r;
    }
};

/// dim K_{p,q} = dim(Wedge^p V (x) R_q) - rank d_{p,q} - rank d_{p+1,q-1}.
inline std::size_t koszul_dim(const GradedRingData& ring, int p, int q,
                              KoszulRankCache* cache = nullptr) {
    ring.validate();
    const int n = static_cast<int>(ring.dim_v());
    if (q < 0 || static_cast<std::size_t>(q) > ring.qmax())
        throw DegreeUnavailable("koszul_dim: weight unavailable");
    if (p < 0 || p > n + 1) throw DegreeUnavailable("koszul_dim: p out of range");
    const std::size_t middle = detail::binom_small(n, p) * ring.dims[q];
    if (middle == 0) return 0;
    // the outgoing differential needs R_{q+1}, except for p = 0 where it
    // maps into the zero space
    if (p >= 1 && static_cast<std::size_t>(q + 1) > ring.qmax())
        throw DegreeUnavailable("koszul_dim: R_{q+1} unavailable");
    KoszulRankCache local(ring);
    KoszulRankCache& c = cache ? *cache : local;
    std::size_t out = p >= 1 ? c.rank(p, q) : 0;
    std::size_t in = q >= 1 ? c.rank(p + 1, q - 1) : 0;
    return middle - out - in;
}

/// Betti table: (p, q) -> dimension, with UNKNOWN entries representable.
struct BettiTable {
    long long genus = 0;
    std::string kind;  // "computed", "predicted-odd", "predicted-even", ...
    std::map<std::pair<int, int>, std::optional<long long>> entries;

    bool known(int p, int q) const {
        auto it = entries.find({p, q});
        return it != entries.end() && it->second.has_value();
    }
    long long at(int p, int q) const {
        auto it = entries.find({p, q});
        if (it == entries.end() || !it->second)
            throw UnknownEntries("BettiTable: entry (" + std::to_string(p) + "," +
                                 std::to_string(q) + ") unknown");
        return *it->second;
    }
    int pmax() const {
        int m = 0;
        for (const auto& [pq, v] : entries) m = std::max(m, pq.first);
        return m;
    }
};

/// Full table for q in {0, 1, 2} and p <= pmax. Distinct cells are
/// independent; `threads > 1` computes the underlying ranks concurrently
/// (results are schedule-independent).
inline BettiTable betti_table(const GradedRingData& ring, int pmax, int threads = 1) {
    ring.validate();
    const int n = static_cast<int>(ring.dim_v());
    if (pmax < 0 || pmax > n + 1) throw DegreeUnavailable("betti_table: pmax out of range");
    KoszulRankCache cache(ring);
    if (threads > 1) {
        std::vector<std::pair<int, int>> jobs;
        for (int q = 0; q <= 2; ++q)
            for (int p = 0; p <= pmax + 1; ++p)
                if (p >= 1 && p <= n && static_cast<std::size_t>(q + 1) <= ring.qmax())
                    jobs.emplace_back(p, q);
        std::atomic<std::size_t> next{0};
        std::vector<std::future<std::vector<std::pair<std::pair<int, int>, std::size_t>>>> fut;
        for (int t = 0; t < threads; ++t)
            fut.push_back(std::async(std::launch::async, [&]() {
                std::vector<std::pair<std::pair<int, int>, std::size_t>> got;
                for (std::size_t j = next++; j < jobs.size(); j = next++) {
                    auto [p, q] = jobs[j];
                    got.push_back({{p, q}, mat_rank(koszul_differential(ring, p, q))});
                }
                return got;
            }));
        for (auto& f : fut)
            for (auto& [pq, r] : f.get()) cache.ranks[pq] = r;
    }
    BettiTable t;
    t.kind = "computed";
    for (int q = 0; q <= 2; ++q)
        for (int p = 0; p <= pmax; ++p)
            t.entries[{p, q}] = static_cast<long long>(koszul_dim(ring, p, q, &cache));
    return t;
}

/// True iff b_{p,2} * b_{p+1,1} = 0 for every consecutive pair in range.
inline bool naturality(const BettiTable& t) {
    const int pm = t.pmax();
    for (int p = 0; p < pm; ++p) {
        if (!t.known(p, 2) || !t.known(p + 1, 1))
            throw UnknownEntries("naturality: unknown entries in tested range");
        if (t.at(p, 2) != 0 && t.at(p + 1, 1) != 0) return false;
    }
    return true;
}

}  // namespace bv
