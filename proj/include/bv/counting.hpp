// Arithmetic functions and the enumerative layer: the Barth-Verra count,
// its exact-order Moebius refinement, brute-force oracles and the sigma_2
// inequality. Everything is exact big-integer arithmetic.
#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bv {

using bigint = boost::multiprecision::cpp_int;

struct NegativeLower : std::runtime_error {
    explicit NegativeLower(const std::string& w) : std::runtime_error(w) {}
};
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& w) : std::runtime_error(w) {}
};

inline std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> f;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            f.emplace_back(d, e);
        }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

/// Moebius function.
inline int moebius(long long n) {
    if (n < 1) throw std::invalid_argument("moebius: n >= 1 required");
    int r = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        r = -r;
    }
    return r;
}

/// Divisor power sum sigma_k(n).
inline bigint sigma(int k, long long n) {
    if (n < 1 || k < 0) throw std::invalid_argument("sigma: n >= 1, k >= 0 required");
    bigint r = 1;
    for (auto [p, e] : factorize(n)) {
        bigint pk = boost::multiprecision::pow(bigint(p), k);
        bigint term = 1, pw = 1;
        for (int j = 1; j <= e; ++j) { pw *= pk; term += pw; }
        r *= term;
    }
    return r;
}

/// Memo tables for mu and sigma_k; values populated on demand.
struct ArithmeticCache {
    std::map<long long, int> mu;
    std::map<std::pair<int, long long>, bigint> sig;

    int moebius(long long n) {
        auto it = mu.find(n);
        if (it != mu.end()) return it->second;
        return mu[n] = bv::moebius(n);
    }
    const bigint& sigma(int k, long long n) {
        auto key = std::make_pair(k, n);
        auto it = sig.find(key);
        if (it != sig.end()) return it->second;
        return sig[key] = bv::sigma(k, n);
    }
};

inline std::vector<long long> divisors(long long n) {
    std::vector<long long> d;
    for (long long i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i != n / i) d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

/// Binomial coefficient with the vanishing convention (a choose b) = 0 for
/// b > a (including negative a).
inline bigint binom_conv(long long a, long long b) {
    if (b < 0) throw NegativeLower("binom_conv: b < 0");
    if (b > a) return 0;
    bigint r = 1;
    for (long long j = 1; j <= b; ++j) {
        r *= (a - b + j);
        r /= j;
    }
    return r;
}

/// |T_l| = (2l^2-2 choose g): divisors with eta_C of order dividing l.
inline bigint bv_count(long long level, long long genus) {
    if (level < 2 || genus < 1) throw std::invalid_argument("bv_count: level >= 2, genus >= 1");
    return binom_conv(2 * level * level - 2, genus);
}

/// Moebius-inverted count of divisors with eta_C of order exactly l.
inline bigint exact_order_count(long long level, long long genus) {
    // level 1 is allowed so the partition identity
    //   sum_{d|l} exact_order_count(d, g) = bv_count(l, g)
    // can run over all divisors; it contributes binom(0, g).
    if (level < 1 || genus < 1)
        throw std::invalid_argument("exact_order_count: level >= 1, genus >= 1");
    bigint s = 0;
    for (long long d : divisors(level))
        s += moebius(level / d) * binom_conv(2 * d * d - 2, genus);
    return s;
}

namespace detail {

/// Exact-order point multiplicities on the zero section: order d occurs
/// f(d) = sum_{e|d} mu(d/e) (2e^2-2) times, d | level.
inline std::map<long long, long long> fiber_order_multiplicities(long long level) {
    std::map<long long, long long> f;
    for (long long d : divisors(level)) {
        if (d == 1) continue;
        long long v = 0;
        for (long long e : divisors(d)) v += moebius(d / e) * (2 * e * e - 2);
        f[d] = v;
    }
    return f;
}

inline bigint brute_force_subsets(const std::vector<long long>& order_of_point,
                                  long long level, long long genus) {
    // enumerate g-element subsets of labeled points, count those with lcm
    // of orders exactly equal to the level
    const std::size_t n = order_of_point.size();
    bigint count = 0;
    std::vector<std::size_t> idx(genus);
    std::vector<long long> lcms(genus + 1);
    lcms[0] = 1;
    long long depth = 0;
    idx[0] = 0;
    while (depth >= 0) {
        if (static_cast<long long>(idx[depth]) >
            static_cast<long long>(n) - (genus - depth)) {
            --depth;
            if (depth >= 0) ++idx[depth];
            continue;
        }
        lcms[depth + 1] = std::lcm(lcms[depth], order_of_point[idx[depth]]);
        if (depth == genus - 1) {
            if (lcms[depth + 1] == level) ++count;
            ++idx[depth];
        } else {
            ++depth;
            idx[depth] = idx[depth - 1] + 1;
        }
    }
    return count;
}

inline bigint brute_force_compositions(const std::map<long long, long long>& mult,
                                       long long level, long long genus) {
    // distribute g choices over the order classes; a distribution counts when
    // the lcm of the used orders is the level
    std::vector<std::pair<long long, long long>> classes(mult.begin(), mult.end());
    bigint total = 0;
    std::vector<long long> take(classes.size(), 0);
    // iterate over all compositions of genus into |classes| parts
    std::function<void(std::size_t, long long, long long, bigint)> rec =
        [&](std::size_t c, long long remaining, long long lcm_so_far, bigint ways) {
            if (c == classes.size()) {
                if (remaining == 0 && lcm_so_far == level) total += ways;
                return;
            }
            auto [d, m] = classes[c];
            for (long long k = 0; k <= std::min(remaining, m); ++k) {
                bigint w = ways * binom_conv(m, k);
                rec(c + 1, remaining - k, k > 0 ? std::lcm(lcm_so_far, d) : lcm_so_far, w);
            }
        };
    rec(0, genus, 1, 1);
    return total;
}

}  // namespace detail

/// Independent oracle for exact_order_count: explicit enumeration over the
/// 2l^2-2 labeled intersection points, each carrying the exact order of the
/// bundle on the fiber through it. Falls back to order-multiplicity
/// compositions when raw subset enumeration would blow the budget.
inline bigint brute_force_exact_order(long long level, long long genus,
                                      bigint budget = bigint(10000000)) {
    if (level < 2 || genus < 1)
        throw std::invalid_argument("brute_force_exact_order: level >= 2, genus >= 1");
    auto mult = detail::fiber_order_multiplicities(level);
    long long npoints = 0;
    for (auto [d, m] : mult) npoints += m;
    std::vector<long long> order_of_point;
    order_of_point.reserve(npoints);
    for (auto [d, m] : mult)
        for (long long j = 0; j < m; ++j) order_of_point.push_back(d);
    if (binom_conv(npoints, genus) <= budget)
        return detail::brute_force_subsets(order_of_point, level, genus);
    // composition count: number of terminal states ~ product of class sizes
    bigint states = 1;
    for (auto [d, m] : mult) states *= (std::min<long long>(m, genus) + 1);
    if (states > budget) throw BudgetExceeded("brute_force_exact_order: budget exceeded");
    return detail::brute_force_compositions(mult, level, genus);
}

/// True iff sigma_2(n) < 2n^2 for all 2 <= n <= nmax.
inline bool sigma2_inequality(long long nmax) {
    if (nmax < 2) throw std::invalid_argument("sigma2_inequality: nmax >= 2");
    // smallest-prime-factor sieve, then multiplicative evaluation per n
    std::vector<int32_t> spf(nmax + 1, 0);
    for (long long i = 2; i <= nmax; ++i)
        if (spf[i] == 0)
            for (long long j = i; j <= nmax; j += i)
                if (spf[j] == 0) spf[j] = int32_t(i);
    for (long long n = 2; n <= nmax; ++n) {
        bigint s2 = 1;
        long long m = n;
        while (m > 1) {
            long long p = spf[m];
            bigint term = 1, pw = 1;
            while (m % p == 0) {
                m /= p;
                pw *= p * p;
                term += pw;
            }
            s2 *= term;
        }
        if (s2 >= bigint(2) * n * n) return false;
    }
    return true;
}

}  // namespace bv
