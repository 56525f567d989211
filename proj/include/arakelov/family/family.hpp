#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arakelov/family/integers.hpp"
#include "arakelov/invariants/green.hpp"
#include "arakelov/surface/model.hpp"

namespace arakelov {

// The genus-3 family y^2 = x(x-1)R(x) with R = x(x-1) + 4F for an integer
// monic quintic F with F(0), F(1) units. Members are semistable over Z[1/2];
// the odd primes dividing disc(R) exactly once, with a unique mod-p double
// root, are the fibers with one node.

struct ReductionReport {
    bool monic_quintic = false;
    bool unit_values = false; // F(0), F(1) in {+1, -1}
    bool disc_nonzero = false;
    bool factorization_complete = true;
    std::vector<long long> F, R, f; // leading-first; f = x(x-1)R is the curve
    i128 disc = 0;                  // disc(R)
    std::vector<std::pair<std::uint64_t, int>> disc_factors;
    i128 unfactored = 1;
    std::vector<std::uint64_t> bad_primes;

    bool conditions_ok() const { return monic_quintic && unit_values && disc_nonzero; }
};

namespace detail {

inline std::vector<long long> family_r_poly(const std::vector<long long>& F) {
    // R = x(x-1) + 4F, degree 5
    std::vector<long long> r(6, 0);
    for (size_t i = 0; i < 6; ++i) r[i] = 4 * F[i];
    r[3] += 1;  // x^2
    r[4] += -1; // -x
    return r;
}

inline std::vector<long long> family_curve_poly(const std::vector<long long>& R) {
    // f = (x^2 - x) R, degree 7
    std::vector<long long> f(8, 0);
    for (size_t i = 0; i < 6; ++i) {
        f[i] += R[i];
        f[i + 1] -= R[i];
    }
    return f;
}

inline std::uint64_t poly_eval_mod(const std::vector<std::uint64_t>& c, std::uint64_t x,
                                   std::uint64_t p) {
    std::uint64_t v = 0;
    for (std::uint64_t ci : c) v = (mulmod_u64(v, x, p) + ci) % p;
    return v;
}

inline std::vector<std::uint64_t> poly_mod_p(const std::vector<long long>& c, std::uint64_t p) {
    std::vector<std::uint64_t> r;
    bool leading = true;
    for (long long v : c) {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        if (leading && m == 0) continue;
        leading = false;
        r.push_back(static_cast<std::uint64_t>(m));
    }
    return r; // leading-first, normalized so r[0] != 0 (empty means zero)
}

inline std::vector<std::uint64_t> poly_gcd_mod(std::vector<std::uint64_t> a,
                                               std::vector<std::uint64_t> b, std::uint64_t p) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        size_t i = 0;
        while (i < v.size() && v[i] == 0) ++i;
        v.erase(v.begin(), v.begin() + static_cast<long>(i));
    };
    while (!b.empty()) {
        // a mod b
        std::uint64_t inv = powmod_u64(b[0], p - 2, p);
        while (a.size() >= b.size()) {
            std::uint64_t q = mulmod_u64(a[0], inv, p);
            for (size_t i = 0; i < b.size(); ++i) {
                std::uint64_t t = mulmod_u64(q, b[i], p);
                a[i] = (a[i] + p - t) % p;
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
        trim(b);
    }
    return a;
}

// requires: p odd, p | disc(R) exactly once. R mod p must have exactly one
// repeated root and its multiplicity must be 2.
inline void verify_double_root(const std::vector<long long>& R, std::uint64_t p) {
    auto Rp = poly_mod_p(R, p);
    if (Rp.size() != R.size())
        throw family_condition_error("prime " + std::to_string(p) +
                                     ": leading coefficient vanishes mod p");
    std::vector<long long> dR(R.size() - 1);
    int d = static_cast<int>(R.size()) - 1;
    for (int j = 0; j < d; ++j) dR[static_cast<size_t>(j)] = R[static_cast<size_t>(j)] * (d - j);
    auto G = poly_gcd_mod(Rp, poly_mod_p(dR, p), p);
    if (G.size() != 2)
        throw family_condition_error("prime " + std::to_string(p) +
                                     ": repeated-root locus mod p is not a single double root");
    std::uint64_t root = mulmod_u64((p - G[1]) % p, powmod_u64(G[0], p - 2, p), p);
    // synthetic division to count the multiplicity
    int mult = 0;
    std::vector<std::uint64_t> cur = Rp;
    while (!cur.empty() && poly_eval_mod(cur, root, p) == 0) {
        ++mult;
        std::vector<std::uint64_t> next(cur.size() - 1);
        std::uint64_t acc = 0;
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            acc = (mulmod_u64(acc, root, p) + cur[i]) % p;
            next[i] = acc;
        }
        cur = std::move(next);
    }
    if (mult != 2)
        throw family_condition_error("prime " + std::to_string(p) + ": repeated root has multiplicity " +
                                     std::to_string(mult) + ", expected 2");
}

} // namespace detail

// Validates the family conditions for F and reports the semistable bad
// primes. Condition failures that make the curve ineligible are reported
// through the flags; a prime violating the semistability pattern (odd p with
// v_p >= 2, or a bad repeated-root shape) throws family_condition_error.
inline ReductionReport check_family(const std::vector<long long>& F) {
    ReductionReport rep;
    rep.F = F;
    rep.monic_quintic = (F.size() == 6 && F[0] == 1);
    if (!rep.monic_quintic) return rep;

    long long f0 = F[5];
    long long f1 = 0;
    for (long long c : F) f1 += c;
    rep.unit_values = (f0 == 1 || f0 == -1) && (f1 == 1 || f1 == -1);
    if (!rep.unit_values) return rep;

    rep.R = detail::family_r_poly(F);
    rep.f = detail::family_curve_poly(rep.R);
    rep.disc = discriminant_int(rep.R);
    rep.disc_nonzero = rep.disc != 0;
    if (!rep.disc_nonzero) return rep;

    FactorList fl = factor_i128(rep.disc);
    rep.disc_factors = fl.factors;
    rep.factorization_complete = fl.complete;
    rep.unfactored = fl.cofactor;

    for (const auto& [p, e] : fl.factors) {
        if (p == 2) continue;
        if (e >= 2)
            throw family_condition_error("prime " + std::to_string(p) +
                                         " divides disc(R) with valuation " + std::to_string(e));
        detail::verify_double_root(rep.R, p);
        rep.bad_primes.push_back(p);
    }
    return rep;
}

// the worked example: F = x^5 + 6x^4 + 4x^3 - 6x^2 - 5x - 1
inline std::vector<long long> builtin_family_f() { return {1, 6, 4, -6, -5, -1}; }

inline Poly builtin_curve_poly() {
    auto rep = detail::family_curve_poly(detail::family_r_poly(builtin_family_f()));
    std::vector<cdouble> lead(rep.begin(), rep.end());
    return Poly::from_leading_first(lead);
}

// -(1/2) sum_sigma log(|det Omega_1|^2 det Im tau); det gram is exactly that
// product per embedding and is homology-basis independent
inline double deg_det_pushforward(const PeriodData& pd) { return -0.5 * pd.log_det_gram; }

inline double deg_det_pushforward(const std::vector<PeriodData>& embeddings) {
    double s = 0.0;
    for (const PeriodData& pd : embeddings) s += deg_det_pushforward(pd);
    return s;
}

// (omega, omega) = 24 log G(W0, W1) for the family sections at x=0 and x=1
inline double omega_self_intersection(const HyperellipticModel& m, double log_s) {
    const Curve& c = m.curve();
    int i0 = -1, i1 = -1;
    for (size_t i = 0; i < c.branch.size(); ++i) {
        if (std::abs(c.branch[i]) < 1e-8) i0 = static_cast<int>(i);
        if (std::abs(c.branch[i] - 1.0) < 1e-8) i1 = static_cast<int>(i);
    }
    if (i0 < 0 || i1 < 0)
        throw invalid_input("omega self-intersection: curve needs branch points at x=0 and x=1");
    auto W0 = SurfacePoint::finite(c.branch[static_cast<size_t>(i0)], +1);
    auto W1 = SurfacePoint::finite(c.branch[static_cast<size_t>(i1)], +1);
    return 24.0 * green_limit_at_weierstrass(m, W0, W1, log_s);
}

// archimedean bracket of the lower bound for (omega, omega); the finite
// places contribute additional non-negative terms not computed here
inline double archimedean_bound_terms(const PeriodData& pd, double log_r) {
    int g = pd.curve.genus;
    if (g < 2) throw invalid_input("archimedean bound: needs genus at least 2");
    return 8.0 * (g - 1.0) / ((2.0 * g - 1.0) * (g + 1.0)) * (log_r + deg_det_pushforward(pd));
}

// archimedean part of the self-intersection of a section through P meeting
// the Weierstrass section W; finite contributions are out of scope
template <class Model>
double point_self_intersection_arch(const Model& m, const typename Model::Point& P,
                                    const typename Model::Point& W, double log_s,
                                    double log_r) {
    return -green_log(m, P, W, log_s) + log_r +
           deg_det_pushforward(m.periods());
}

} // namespace arakelov
