#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov {

using i128 = __int128;
using u128 = unsigned __int128;

inline std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace detail {

// fraction-free Gaussian elimination; every intermediate entry is a minor of
// the input, so the Hadamard guard run by the callers keeps products in range
inline i128 bareiss_det(std::vector<std::vector<i128>>& M) {
    int n = static_cast<int>(M.size());
    i128 prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (M[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (M[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { swap = i; break; }
            if (swap < 0) return 0;
            std::swap(M[static_cast<size_t>(k)], M[static_cast<size_t>(swap)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                i128 t = M[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                             M[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                         M[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                             M[static_cast<size_t>(k)][static_cast<size_t>(j)];
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] = t / prev;
            }
            M[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
        }
        prev = M[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    i128 d = M[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
    return sign > 0 ? d : -d;
}

} // namespace detail

// resultant of integer polynomials (leading-first coefficients) via the
// Sylvester determinant, exact in 128-bit arithmetic
inline i128 resultant_int(const std::vector<long long>& a, const std::vector<long long>& b) {
    int m = static_cast<int>(a.size()) - 1, n = static_cast<int>(b.size()) - 1;
    if (m < 0 || n < 0 || a[0] == 0 || b[0] == 0)
        throw invalid_input("resultant: polynomials must have nonzero leading coefficient");
    int N = m + n;

    double hadamard = 1.0;
    auto row_norm = [](const std::vector<long long>& c) {
        double s = 0.0;
        for (long long v : c) s += static_cast<double>(v) * static_cast<double>(v);
        return std::sqrt(s);
    };
    for (int i = 0; i < n; ++i) hadamard *= row_norm(a);
    for (int i = 0; i < m; ++i) hadamard *= row_norm(b);
    if (hadamard > 1.2e19)
        throw invalid_input("resultant: coefficients too large for exact 128-bit arithmetic");

    std::vector<std::vector<i128>> M(static_cast<size_t>(N),
                                     std::vector<i128>(static_cast<size_t>(N), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j)
            M[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = a[static_cast<size_t>(j)];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j)
            M[static_cast<size_t>(n + i)][static_cast<size_t>(i + j)] = b[static_cast<size_t>(j)];
    return detail::bareiss_det(M);
}

inline i128 discriminant_int(const std::vector<long long>& f) {
    int d = static_cast<int>(f.size()) - 1;
    if (d < 2) throw invalid_input("discriminant: degree must be at least 2");
    std::vector<long long> df(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
        df[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] * (d - j);
    if (df[0] == 0) throw invalid_input("discriminant: derivative dropped degree");
    i128 res = resultant_int(f, df);
    i128 q = res / f[0];
    int s = (d * (d - 1) / 2) % 2;
    return s ? -q : q;
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// deterministic Miller-Rabin below 2^64
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                            29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                            29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

inline std::uint64_t pollard_brent(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto f = [n, c](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = f(y);
            int k = 0;
            while (k < lam && d == 1) {
                std::uint64_t ys = y;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                if (d == n) {
                    // backtrack one by one
                    d = 1;
                    y = ys;
                    while (d == 1) {
                        y = f(y);
                        d = std::gcd(x > y ? x - y : y - x, n);
                    }
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

inline void factor_u64_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_brent(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

} // namespace detail

struct FactorList {
    std::vector<std::pair<std::uint64_t, int>> factors; // prime, exponent
    bool complete = true;
    i128 cofactor = 1; // unfactored remainder when incomplete
};

inline FactorList factor_i128(i128 n) {
    FactorList fl;
    if (n < 0) n = -n;
    if (n <= 1) return fl;
    std::vector<std::uint64_t> primes;
    for (std::uint64_t d = 2; d <= 1000000 && static_cast<i128>(d) * d <= n; d == 2 ? d = 3 : d += 2)
        while (n % d == 0) { primes.push_back(d); n /= d; }
    if (n > 1) {
        if (n <= static_cast<i128>(UINT64_MAX)) {
            detail::factor_u64_into(static_cast<std::uint64_t>(n), primes);
        } else {
            fl.complete = false;
            fl.cofactor = n;
        }
    }
    std::sort(primes.begin(), primes.end());
    for (size_t i = 0; i < primes.size();) {
        size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        fl.factors.emplace_back(primes[i], static_cast<int>(j - i));
        i = j;
    }
    return fl;
}

} // namespace arakelov
