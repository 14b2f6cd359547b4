// Exact arithmetic over a prime field and deterministic dense linear algebra.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bv {

struct NotInSpan : std::runtime_error {
    explicit NotInSpan(const std::string& what) : std::runtime_error(what) {}
};

/// Odd prime modulus p < 2^31. All element values live in [0, p).
struct PrimeField {
    std::uint32_t p;

    explicit PrimeField(std::uint32_t modulus) : p(modulus) {
        if (p < 3 || p >= (1u << 31) || !is_prime(p))
            throw std::invalid_argument("PrimeField: modulus must be an odd prime < 2^31");
    }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    std::uint32_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += p;
        return static_cast<std::uint32_t>(r);
    }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint64_t s = std::uint64_t(a) + b;
        return s >= p ? std::uint32_t(s - p) : std::uint32_t(s);
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + p - b;
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return std::uint32_t(std::uint64_t(a) * b % p);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = 1 % p, base = a % p;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("PrimeField::inv(0)");
        return pow(a, p - 2);
    }

    bool operator==(const PrimeField&) const = default;
};

/// Dense matrix over a prime field, row-major.
struct FMatrix {
    PrimeField field;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> data;  // rows*cols entries, reduced mod p

    FMatrix(PrimeField f, std::size_t r, std::size_t c)
        : field(f), rows(r), cols(c), data(r * c, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static FMatrix identity(PrimeField f, std::size_t n) {
        FMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    FMatrix transposed() const {
        FMatrix t(field, cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    FMatrix operator*(const FMatrix& o) const {
        if (cols != o.rows || !(field == o.field))
            throw std::invalid_argument("FMatrix: incompatible product");
        FMatrix r(field, rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                std::uint32_t a = at(i, k);
                if (!a) continue;
                for (std::size_t j = 0; j < o.cols; ++j)
                    r.at(i, j) = field.add(r.at(i, j), field.mul(a, o.at(k, j)));
            }
        return r;
    }

    std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& v) const {
        if (v.size() != cols) throw std::invalid_argument("FMatrix::apply: size mismatch");
        std::vector<std::uint32_t> r(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                acc += std::uint64_t(at(i, j)) * v[j];
                if ((j & 63) == 63) acc %= field.p;
            }
            r[i] = std::uint32_t(acc % field.p);
        }
        return r;
    }
};

namespace detail {

// In-place row echelon over uint64 working storage. Pivot rows are kept
// reduced; other rows accumulate unreduced products while the bound allows,
// which keeps the inner loop a plain mul-add for small p.
// Pivot rule: columns left to right, first not-yet-used row with a nonzero
// entry (row-major order), so results are reproducible.
struct Echelon {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

inline Echelon echelon_inplace(const PrimeField& F, std::vector<std::uint64_t>& a,
                               std::size_t rows, std::size_t cols, bool reduced) {
    const std::uint64_t p = F.p;
    // Safe unreduced accumulation budget: entries grow by < p^2 per pivot step.
    const bool lazy = p <= 46341 && rows < (std::uint64_t(1) << 20);
    Echelon e;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i) {
            a[i * cols + col] %= p;
            if (a[i * cols + col] != 0) { piv = i; break; }
        }
        if (piv == rows) continue;
        if (piv != r)
            for (std::size_t j = col; j < cols; ++j)
                std::swap(a[piv * cols + j], a[r * cols + j]);
        // normalize pivot row
        std::uint64_t* pr = &a[r * cols];
        for (std::size_t j = col; j < cols; ++j) pr[j] %= p;
        std::uint64_t ipv = F.inv(std::uint32_t(pr[col]));
        for (std::size_t j = col; j < cols; ++j) pr[j] = pr[j] * ipv % p;
        std::size_t lo = reduced ? 0 : r + 1;
        for (std::size_t i = lo; i < rows; ++i) {
            if (i == r) continue;
            std::uint64_t* ri = &a[i * cols];
            std::uint64_t v = ri[col] % p;
            if (!v) { ri[col] = 0; continue; }
            std::uint64_t f = p - v;
            if (lazy) {
                for (std::size_t j = col; j < cols; ++j) ri[j] += f * pr[j];
            } else {
                for (std::size_t j = col; j < cols; ++j)
                    ri[j] = (ri[j] % p + f * pr[j]) % p;
            }
            ri[col] = 0;
        }
        e.pivot_cols.push_back(col);
        ++r;
    }
    e.rank = r;
    if (reduced)
        for (auto& v : a) v %= p;
    return e;
}

inline std::vector<std::uint64_t> widen(const FMatrix& m) {
    return std::vector<std::uint64_t>(m.data.begin(), m.data.end());
}

}  // namespace detail

/// Rank over the prime field.
inline std::size_t mat_rank(const FMatrix& m) {
    auto work = detail::widen(m);
    return detail::echelon_inplace(m.field, work, m.rows, m.cols, false).rank;
}

/// Basis of the right kernel; size cols - rank.
inline std::vector<std::vector<std::uint32_t>> mat_kernel_basis(const FMatrix& m) {
    auto work = detail::widen(m);
    auto e = detail::echelon_inplace(m.field, work, m.rows, m.cols, true);
    std::vector<std::size_t> pivot_of_col(m.cols, SIZE_MAX);
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) pivot_of_col[e.pivot_cols[r]] = r;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (pivot_of_col[j] != SIZE_MAX) continue;
        std::vector<std::uint32_t> v(m.cols, 0);
        v[j] = 1;
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
            v[e.pivot_cols[r]] = m.field.neg(std::uint32_t(work[r * m.cols + j]));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Coordinates c with sum c_i * basis_i = v; throws NotInSpan otherwise.
inline std::vector<std::uint32_t> express_in_basis(
    const PrimeField& F, const std::vector<std::uint32_t>& v,
    const std::vector<std::vector<std::uint32_t>>& basis) {
    const std::size_t dim = v.size();
    const std::size_t k = basis.size();
    for (const auto& b : basis)
        if (b.size() != dim) throw std::invalid_argument("express_in_basis: size mismatch");
    // augmented system [B | v] with basis vectors as columns
    FMatrix aug(F, dim, k + 1);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < dim; ++i) aug.at(i, j) = basis[j][i];
    for (std::size_t i = 0; i < dim; ++i) aug.at(i, k) = v[i];
    auto work = detail::widen(aug);
    auto e = detail::echelon_inplace(F, work, dim, k + 1, true);
    std::vector<std::uint32_t> coords(k, 0);
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
        if (e.pivot_cols[r] == k) throw NotInSpan("express_in_basis: vector outside span");
        coords[e.pivot_cols[r]] = std::uint32_t(work[r * (k + 1) + k]);
    }
    return coords;
}

}  // namespace bv
