#pragma once

#include <cmath>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/invariants/green.hpp"
#include "arakelov/numerics/richardson.hpp"
#include "arakelov/numerics/rng.hpp"
#include "arakelov/theta/characteristics.hpp"

namespace arakelov {

namespace detail {

inline long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

// log T(X) from the even theta constants of a hyperelliptic period matrix:
// the product over the balanced characteristics is a modular form whose norm
// is a power of ||Delta_g||, and T is a fixed power of that norm.
template <class Model>
double log_t_modular(const Model& m) {
    const ThetaEvaluator& th = m.theta();
    const SiegelPoint& sp = th.siegel();
    int g = m.genus();

    auto chars = balanced_even_characteristics(g);
    long r = detail::binom(2 * g + 1, g + 1);
    if (static_cast<long>(chars.size()) != r)
        throw basis_inconsistency_error("modular T: characteristic family has wrong size");
    long n = detail::binom(2 * g, g + 1);

    double sum = 0.0;
    for (const Characteristic& ch : chars) {
        double nl = th.norm_log(ch.point(sp));
        if (nl < std::log(1e-10))
            throw numeric_degeneracy("modular T: an even theta constant nearly vanishes",
                                     std::exp(nl));
        sum += nl;
    }

    const double two_pi = 6.283185307179586476925286766559;
    double c = (3.0 * g - 1.0) / (8.0 * static_cast<double>(n) * g);
    return -2.0 * g * std::log(two_pi) -
           c * (8.0 * sum - (4.0 * g + 4.0) * static_cast<double>(n) * std::log(2.0));
}

// log T(X) from theta norms at g generic points plus a generic probe Q,
// including the Jacobian-of-theta norm ||J|| at the point family. Throws
// genericity_error when any factor degenerates; callers resample.
template <class Model>
double log_t_theta_core(const Model& m, const std::vector<typename Model::Point>& pts,
                        const typename Model::Point& Q) {
    int g = m.genus();
    if (static_cast<int>(pts.size()) != g)
        throw invalid_input("theta-derivative T: needs exactly g points");
    const ThetaEvaluator& th = m.theta();
    const JacVec& kap = m.kappa();

    auto nl_checked = [&](const JacVec& z) {
        double nl = th.norm_log(z);
        if (nl < detail::genericity_floor)
            throw genericity_error("theta-derivative T: a theta factor nearly vanishes");
        return nl;
    };

    std::vector<JacVec> A(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) A[k] = m.abel(pts[k]);
    JacVec aQ = m.abel(Q);
    JacVec sumA(static_cast<size_t>(g), 0.0);
    for (const JacVec& a : A) detail::vec_axpy(sumA, 1.0, a);

    // class of P_1 + .. + P_g - Q
    JacVec v = detail::vec_sum(1.0, sumA, -1.0, aQ);
    detail::vec_axpy(v, 1.0, kap);
    double nl_all = nl_checked(v);

    double nl_each = 0.0, nl_pairs = 0.0, nl_branch = 0.0;
    for (size_t k = 0; k < A.size(); ++k) {
        JacVec wk = detail::vec_sum(static_cast<double>(g), A[k], -1.0, aQ);
        detail::vec_axpy(wk, 1.0, kap);
        nl_each += nl_checked(wk);
        for (size_t l = 0; l < A.size(); ++l) {
            if (l == k) continue;
            JacVec u = detail::vec_sum(static_cast<double>(g), A[k], -1.0, A[l]);
            detail::vec_axpy(u, 1.0, kap);
            nl_pairs += nl_checked(u);
        }
        if (m.weierstrass_weight() > 0) {
            for (int b = 0; b < m.weierstrass_count(); ++b) {
                JacVec u = detail::vec_sum(static_cast<double>(g), A[k], -1.0,
                                           m.weierstrass_image(b));
                detail::vec_axpy(u, 1.0, kap);
                nl_branch += nl_checked(u);
            }
        }
    }

    std::vector<JacVec> rows(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        rows[k] = detail::vec_sum(1.0, sumA, -1.0, A[k]);
        detail::vec_axpy(rows[k], 1.0, kap);
    }
    double jn = th.j_norm_log(rows);
    if (jn < detail::genericity_floor)
        throw genericity_error("theta-derivative T: Jacobian norm nearly vanishes");

    double gd = static_cast<double>(g);
    return (2.0 * gd - 2.0) * (nl_all - nl_each / gd) + nl_pairs / gd - 2.0 * jn +
           (gd - 1.0) * m.weierstrass_weight() / (gd * gd * gd * gd) * nl_branch;
}

template <class Model>
double log_t_theta_deriv(const Model& m, Rng& rng) {
    int g = m.genus();
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<typename Model::Point> pts;
        bool distinct = true;
        for (int k = 0; k < g + 1 && distinct; ++k) {
            auto P = m.random_regular_point(rng);
            for (const auto& R : pts)
                if (m.same_point(P, R)) { distinct = false; break; }
            pts.push_back(P);
        }
        if (!distinct) continue;
        auto Q = pts.back();
        pts.pop_back();
        try {
            return log_t_theta_core(m, pts, Q);
        } catch (const genericity_error&) {
            continue;
        }
    }
    throw genericity_error("theta-derivative T: no generic configuration in 10 attempts");
}

// log T(X) from the Wronskian of the orthonormal frame at one regular point:
//
//   log T = -(g+1) log||F_z||(P) + ((g-1) w / g^3) sum_W ||.||(gP - W)
//           + 2 log|W_z(P)|
//
// where ||F_z||(P) = lim ||.||-norm(gP - P_h) / |h|^g along a chart ray. A
// rescaled chart z' = lam z changes both factors but not the total; lam is
// exposed so tests can exercise that cancellation.
template <class Model>
double log_t_wronskian(const Model& m, const typename Model::Point& P, double lam = 1.0) {
    if (m.is_weierstrass(P))
        throw singular_point_error("wronskian T: needs a regular point");
    int g = m.genus();
    ThetaEvaluator sharp(m.theta().siegel(), 1e-15);

    JacVec aP = m.abel_tight(P);
    JacVec w = aP;
    for (auto& c : w) c *= static_cast<double>(g);
    detail::vec_axpy(w, 1.0, m.kappa());

    double h0 = 0.45 * m.local_clearance(P);
    cdouble dir = std::polar(1.0, 0.377123);
    auto F = [&](double h) {
        JacVec aPh = m.abel_step(P, aP, h * dir);
        return sharp.norm_log(detail::vec_sum(1.0, w, -1.0, aPh)) - g * std::log(h);
    };
    double lerr = 0.0;
    double log_fz = richardson_limit(F, h0, 1e-7, 9, &lerr, 2e-5) - g * std::log(lam);

    double nl_branch = 0.0;
    if (m.weierstrass_weight() > 0)
        for (int b = 0; b < m.weierstrass_count(); ++b)
            nl_branch += sharp.norm_log(detail::vec_sum(1.0, w, -1.0, m.weierstrass_image(b)));

    cdouble W = m.wronskian_value(P);
    if (std::abs(W) < 1e-8)
        throw genericity_error("wronskian T: frame Wronskian nearly vanishes");
    double log_w = std::log(std::abs(W)) - 0.5 * g * (g + 1.0) * std::log(lam);

    double gd = static_cast<double>(g);
    return -(gd + 1.0) * log_fz +
           (gd - 1.0) * m.weierstrass_weight() / (gd * gd * gd) * nl_branch + 2.0 * log_w;
}

} // namespace arakelov
