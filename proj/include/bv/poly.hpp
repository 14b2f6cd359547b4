// Dense univariate polynomials over a prime field.
#pragma once

#include <vector>

#include "bv/ffield.hpp"

namespace bv {

struct Poly {
    PrimeField F;
    std::vector<std::uint32_t> c;  // c[i] is the x^i coefficient; no trailing zeros

    explicit Poly(PrimeField f) : F(f) {}
    Poly(PrimeField f, std::vector<std::uint32_t> coeffs) : F(f), c(std::move(coeffs)) {
        trim();
    }
    static Poly constant(PrimeField f, std::uint32_t v) {
        return Poly(f, {v});
    }
    static Poly monomial(PrimeField f, std::size_t deg, std::uint32_t v = 1) {
        std::vector<std::uint32_t> cs(deg + 1, 0);
        cs[deg] = v;
        return Poly(f, std::move(cs));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    long long degree() const { return c.empty() ? -1 : static_cast<long long>(c.size()) - 1; }
    std::uint32_t coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }

    Poly operator+(const Poly& o) const {
        Poly r(F);
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(coeff(i), o.coeff(i));
        r.trim();
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r(F);
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.sub(coeff(i), o.coeff(i));
        r.trim();
        return r;
    }
    Poly operator*(const Poly& o) const {
        Poly r(F);
        if (zero() || o.zero()) return r;
        r.c.assign(c.size() + o.c.size() - 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i]) continue;
            for (std::size_t j = 0; j < o.c.size(); ++j)
                r.c[i + j] = F.add(r.c[i + j], F.mul(c[i], o.c[j]));
        }
        r.trim();
        return r;
    }
    Poly scaled(std::uint32_t s) const {
        Poly r(F);
        r.c = c;
        for (auto& v : r.c) v = F.mul(v, s);
        r.trim();
        return r;
    }
    std::uint32_t eval(std::uint32_t x) const {
        std::uint32_t r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = F.add(F.mul(r, x), c[i]);
        return r;
    }
    Poly pow(unsigned e) const {
        Poly r = constant(F, 1);
        Poly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
};

/// Truncated power series over the field (fixed length, index = t-exponent).
struct Series {
    PrimeField F;
    std::vector<std::uint32_t> c;

    Series(PrimeField f, std::size_t len) : F(f), c(len, 0) {}
    std::size_t len() const { return c.size(); }

    static Series constant(PrimeField f, std::uint32_t v, std::size_t len) {
        Series s(f, len);
        if (len) s.c[0] = v;
        return s;
    }

    Series add(const Series& o) const {
        Series r(F, len());
        for (std::size_t i = 0; i < len(); ++i) r.c[i] = F.add(c[i], o.c[i]);
        return r;
    }
    Series sub(const Series& o) const {
        Series r(F, len());
        for (std::size_t i = 0; i < len(); ++i) r.c[i] = F.sub(c[i], o.c[i]);
        return r;
    }
    Series mul(const Series& o) const {
        Series r(F, len());
        for (std::size_t i = 0; i < len(); ++i) {
            if (!c[i]) continue;
            for (std::size_t j = 0; i + j < len(); ++j)
                r.c[i + j] = F.add(r.c[i + j], F.mul(c[i], o.c[j]));
        }
        return r;
    }
    Series scaled(std::uint32_t s) const {
        Series r(F, len());
        for (std::size_t i = 0; i < len(); ++i) r.c[i] = F.mul(c[i], s);
        return r;
    }
    /// Multiplicative inverse; requires a unit constant term.
    Series inverse() const {
        if (len() == 0 || c[0] == 0) throw std::domain_error("Series::inverse: not a unit");
        Series r(F, len());
        std::uint32_t i0 = F.inv(c[0]);
        r.c[0] = i0;
        for (std::size_t n = 1; n < len(); ++n) {
            std::uint32_t acc = 0;
            for (std::size_t k = 1; k <= n; ++k) acc = F.add(acc, F.mul(c[k], r.c[n - k]));
            r.c[n] = F.neg(F.mul(acc, i0));
        }
        return r;
    }
    Series pow(unsigned e) const {
        Series r = constant(F, 1, len());
        Series b = *this;
        while (e) {
            if (e & 1) r = r.mul(b);
            b = b.mul(b);
            e >>= 1;
        }
        return r;
    }
};

}  // namespace bv
