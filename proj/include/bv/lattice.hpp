// Integral lattices with ordered bases: pairings, discriminants, embeddings,
// primitivity certification, and the named Picard lattices of the toolkit.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bv {

using bigint = boost::multiprecision::cpp_int;

struct UnknownName : std::runtime_error {
    explicit UnknownName(const std::string& w) : std::runtime_error(w) {}
};
struct ParameterOutOfRange : std::runtime_error {
    explicit ParameterOutOfRange(const std::string& w) : std::runtime_error(w) {}
};
struct LatticeMismatch : std::runtime_error {
    explicit LatticeMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct NotAnEmbedding : std::runtime_error {
    explicit NotAnEmbedding(const std::string& w) : std::runtime_error(w) {}
};
struct DegenerateLattice : std::runtime_error {
    explicit DegenerateLattice(const std::string& w) : std::runtime_error(w) {}
};

/// Integral lattice: ordered basis labels and a symmetric Gram matrix.
/// Value type, compared structurally.
struct Lattice {
    std::vector<std::string> basis_labels;
    std::vector<std::vector<long long>> gram;

    Lattice(std::vector<std::string> labels, std::vector<std::vector<long long>> g)
        : basis_labels(std::move(labels)), gram(std::move(g)) {
        const std::size_t n = basis_labels.size();
        if (gram.size() != n) throw std::invalid_argument("Lattice: gram size");
        for (std::size_t i = 0; i < n; ++i) {
            if (gram[i].size() != n) throw std::invalid_argument("Lattice: gram not square");
            for (std::size_t j = 0; j < n; ++j)
                if (gram[i][j] != gram[j][i])
                    throw std::invalid_argument("Lattice: gram not symmetric");
        }
    }

    std::size_t rank() const { return basis_labels.size(); }
    bool is_even() const {
        for (std::size_t i = 0; i < rank(); ++i)
            if (gram[i][i] % 2 != 0) return false;
        return true;
    }
    bool operator==(const Lattice&) const = default;
};

/// Class in a lattice, as integer coordinates in the ordered basis.
struct LatticeClass {
    Lattice lattice;
    std::vector<long long> coords;

    LatticeClass(Lattice l, std::vector<long long> c)
        : lattice(std::move(l)), coords(std::move(c)) {
        if (coords.size() != lattice.rank())
            throw std::invalid_argument("LatticeClass: coordinate length");
    }

    LatticeClass operator+(const LatticeClass& o) const {
        if (lattice != o.lattice) throw LatticeMismatch("class addition across lattices");
        auto c = coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coords[i];
        return {lattice, c};
    }
    LatticeClass operator*(long long s) const {
        auto c = coords;
        for (auto& x : c) x *= s;
        return {lattice, c};
    }
    LatticeClass operator-(const LatticeClass& o) const { return *this + o * -1; }
    bool operator==(const LatticeClass&) const = default;
};

/// x^T . gram . y
inline long long pair(const LatticeClass& x, const LatticeClass& y) {
    if (x.lattice != y.lattice) throw LatticeMismatch("pairing across lattices");
    long long s = 0;
    const std::size_t n = x.lattice.rank();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s += x.coords[i] * x.lattice.gram[i][j] * y.coords[j];
    return s;
}

enum class LatticeName { upsilon, omega, hyperelliptic };

/// The named Picard lattices, with the published basis order.
inline Lattice named_lattice(LatticeName name, long long g_or_i) {
    switch (name) {
        case LatticeName::upsilon: {
            const long long g = g_or_i;
            if (g < 3) throw ParameterOutOfRange("upsilon: need g >= 3");
            return Lattice({"L", "eta"}, {{2 * g - 2, 0}, {0, -4}});
        }
        case LatticeName::omega: {
            if (g_or_i < 3) throw ParameterOutOfRange("omega: need g >= 3");
            return Lattice({"E", "Gamma", "eta"},
                           {{0, 1, 0}, {1, -2, 0}, {0, 0, -4}});
        }
        case LatticeName::hyperelliptic: {
            const long long i = g_or_i;
            if (i < 1) throw ParameterOutOfRange("hyperelliptic: need i >= 1");
            return Lattice({"L", "eta", "E"},
                           {{4 * i + 8, 0, 2}, {0, -4, 0}, {2, 0, 0}});
        }
    }
    throw UnknownName("named_lattice: unknown name");
}

inline Lattice named_lattice(const std::string& name, long long g_or_i) {
    if (name == "upsilon") return named_lattice(LatticeName::upsilon, g_or_i);
    if (name == "omega") return named_lattice(LatticeName::omega, g_or_i);
    if (name == "hyperelliptic") return named_lattice(LatticeName::hyperelliptic, g_or_i);
    throw UnknownName("named_lattice: " + name);
}

namespace detail {

inline bigint int_det(std::vector<std::vector<bigint>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    // fraction-free Bareiss elimination
    bigint prev = 1;
    long long sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t s = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m[i][k] != 0) { s = i; break; }
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

}  // namespace detail

/// Determinant of the Gram matrix (1 for the rank-0 lattice).
inline long long discriminant(const Lattice& l) {
    std::vector<std::vector<bigint>> m(l.rank(), std::vector<bigint>(l.rank()));
    for (std::size_t i = 0; i < l.rank(); ++i)
        for (std::size_t j = 0; j < l.rank(); ++j) m[i][j] = l.gram[i][j];
    bigint d = detail::int_det(std::move(m));
    return static_cast<long long>(d);
}

/// Pairing-preserving embedding: columns are target coordinates of the
/// source basis vectors.
struct LatticeEmbedding {
    Lattice source, target;
    std::vector<std::vector<long long>> matrix;  // target.rank() x source.rank()

    LatticeEmbedding(Lattice s, Lattice t, std::vector<std::vector<long long>> m)
        : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
        if (matrix.size() != target.rank())
            throw std::invalid_argument("LatticeEmbedding: row count");
        for (const auto& r : matrix)
            if (r.size() != source.rank())
                throw std::invalid_argument("LatticeEmbedding: column count");
    }

    bool preserves_pairing() const {
        const std::size_t n = source.rank(), N = target.rank();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                long long s = 0;
                for (std::size_t i = 0; i < N; ++i)
                    for (std::size_t j = 0; j < N; ++j)
                        s += matrix[i][a] * target.gram[i][j] * matrix[j][b];
                if (s != source.gram[a][b]) return false;
            }
        return true;
    }

    LatticeClass apply(const LatticeClass& x) const {
        if (x.lattice != source) throw LatticeMismatch("embedding applied to foreign class");
        std::vector<long long> c(target.rank(), 0);
        for (std::size_t i = 0; i < target.rank(); ++i)
            for (std::size_t a = 0; a < source.rank(); ++a)
                c[i] += matrix[i][a] * x.coords[a];
        return {target, c};
    }
};

/// Elementary divisors (Smith normal form diagonal, nonzero entries).
inline std::vector<bigint> elementary_divisors(std::vector<std::vector<bigint>> m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    std::vector<bigint> divs;
    std::size_t t = 0;
    using boost::multiprecision::abs;
    while (t < rows && t < cols) {
        // find nonzero pivot with smallest absolute value
        std::size_t pi = rows, pj = cols;
        bigint best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (best == 0 || abs(m[i][j]) < best)) {
                    best = abs(m[i][j]);
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        std::swap(m[t], m[pi]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                bigint q = m[i][t] / m[t][t];
                if (q != 0)
                    for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) {
                    std::swap(m[t], m[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                bigint q = m[t][j] / m[t][t];
                if (q != 0)
                    for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) {
                    for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
                    clean = false;
                }
            }
        }
        divs.push_back(abs(m[t][t]));
        ++t;
    }
    // enforce divisibility chain
    for (std::size_t i = 0; i + 1 < divs.size(); ++i)
        for (std::size_t j = i + 1; j < divs.size(); ++j) {
            bigint g = gcd(divs[i], divs[j]);
            bigint l = divs[i] / g * divs[j];
            divs[i] = g;
            divs[j] = l;
        }
    return divs;
}

/// True iff all elementary divisors of the embedding matrix are 1, i.e. the
/// image is a primitive sublattice (torsion-free cokernel on its saturation).
inline bool is_primitive(const LatticeEmbedding& e) {
    if (!e.preserves_pairing())
        throw NotAnEmbedding("is_primitive: pairing not preserved");
    std::vector<std::vector<bigint>> m(e.target.rank(),
                                       std::vector<bigint>(e.source.rank()));
    for (std::size_t i = 0; i < e.target.rank(); ++i)
        for (std::size_t j = 0; j < e.source.rank(); ++j) m[i][j] = e.matrix[i][j];
    auto divs = elementary_divisors(std::move(m));
    if (divs.size() != e.source.rank())
        throw NotAnEmbedding("is_primitive: matrix not injective");
    for (const auto& d : divs)
        if (d != 1) return false;
    return true;
}

namespace detail {

struct Fraction {
    bigint num, den;  // den > 0
    Fraction(bigint n = 0, bigint d = 1) : num(std::move(n)), den(std::move(d)) {
        if (den == 0) throw std::domain_error("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        bigint g = gcd(abs(num), den);
        if (g > 1) { num /= g; den /= g; }
    }
    Fraction operator+(const Fraction& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Fraction operator-(const Fraction& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Fraction operator*(const Fraction& o) const { return {num * o.num, den * o.den}; }
    Fraction operator/(const Fraction& o) const { return {num * o.den, den * o.num}; }
    bool zero() const { return num == 0; }
    int sign() const { return num == 0 ? 0 : (num < 0 ? -1 : 1); }
};

}  // namespace detail

/// Sylvester signature (positives, negatives) by exact rational congruent
/// diagonalization. Requires a nondegenerate Gram matrix.
inline std::pair<int, int> signature(const Lattice& l) {
    if (l.rank() > 0 && discriminant(l) == 0)
        throw DegenerateLattice("signature: degenerate Gram matrix");
    using detail::Fraction;
    const std::size_t n = l.rank();
    std::vector<std::vector<Fraction>> m(n, std::vector<Fraction>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Fraction(l.gram[i][j]);
    int pos = 0, neg = 0;
    std::size_t k = 0;
    while (k < n) {
        if (m[k][k].zero()) {
            // look for a later index with nonzero diagonal, else mix in a row
            std::size_t s = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!m[i][i].zero()) { s = i; break; }
            if (s < n) {
                std::swap(m[k], m[s]);
                for (std::size_t i = 0; i < n; ++i) std::swap(m[i][k], m[i][s]);
            } else {
                std::size_t j = n;
                for (std::size_t i = k + 1; i < n; ++i)
                    if (!m[k][i].zero()) { j = i; break; }
                if (j == n) throw DegenerateLattice("signature: degenerate block");
                // basis change e_k += e_j makes the diagonal entry 2*m[k][j]
                for (std::size_t i = 0; i < n; ++i) m[k][i] = m[k][i] + m[j][i];
                for (std::size_t i = 0; i < n; ++i) m[i][k] = m[i][k] + m[i][j];
            }
            continue;
        }
        Fraction d = m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k].zero()) continue;
            Fraction f = m[i][k] / d;
            for (std::size_t j = k; j < n; ++j) m[i][j] = m[i][j] - f * m[k][j];
            for (std::size_t j = k; j < n; ++j) m[j][i] = m[j][i] - f * m[j][k];
        }
        (d.sign() > 0 ? pos : neg)++;
        ++k;
    }
    return {pos, neg};
}

/// True iff the mod-8 criterion rules out an even unimodular lattice of this
/// signature: (positives - negatives) not divisible by 8.
inline bool even_unimodular_obstruction(std::pair<int, int> sig) {
    return ((sig.first - sig.second) % 8 + 8) % 8 != 0;
}

/// The embedding L -> Gamma + g E, eta -> eta of the rank-2 lattice into the
/// elliptic one.
inline LatticeEmbedding upsilon_to_omega(long long g) {
    return {named_lattice(LatticeName::upsilon, g), named_lattice(LatticeName::omega, g),
            {{g, 0}, {1, 0}, {0, 1}}};
}

/// The embedding L -> L, eta -> eta into the hyperelliptic lattice for
/// genus g = 2i+5.
inline LatticeEmbedding upsilon_to_hyperelliptic(long long i) {
    return {named_lattice(LatticeName::upsilon, 2 * i + 5),
            named_lattice(LatticeName::hyperelliptic, i),
            {{1, 0}, {0, 1}, {0, 0}}};
}

}  // namespace bv
