#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/richardson.hpp"
#include "arakelov/surface/periods.hpp"
#include "arakelov/theta/theta.hpp"

namespace arakelov {

namespace detail {

inline JacVec vec_sum(double ca, const JacVec& a, double cb, const JacVec& b) {
    JacVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] + cb * b[i];
    return r;
}

inline void vec_axpy(JacVec& r, double c, const JacVec& a) {
    for (size_t i = 0; i < a.size(); ++i) r[i] += c * a[i];
}

// theta-norm logs below this are treated as degenerate configurations
constexpr double genericity_floor = -18.420680743952367; // log(1e-8)

} // namespace detail

// log G(P,Q) for the Arakelov-Green function, evaluated through theta norms:
//
//   g log G(P,Q) = (1/g^2) log S + ||.||(gP - Q) - (1/g^3) sum_W w ||.||(gP - W)
//
// where ||.||(D) is the theta norm log at the Pic_{g-1} class of D and the sum
// runs over the Weierstrass points with their common weight. P must be
// regular; Q is unrestricted (P = Q handled by the caller).
template <class Model>
double green_log_from_abel(const Model& m, const JacVec& aP, const JacVec& aQ,
                           double log_s, const ThetaEvaluator& th) {
    int g = m.genus();
    JacVec w = aP;
    for (auto& c : w) c *= static_cast<double>(g);
    detail::vec_axpy(w, 1.0, m.kappa());

    double val = log_s / (g * g) + th.norm_log(detail::vec_sum(1.0, w, -1.0, aQ));
    if (m.weierstrass_weight() > 0) {
        double s = 0.0;
        for (int k = 0; k < m.weierstrass_count(); ++k)
            s += th.norm_log(detail::vec_sum(1.0, w, -1.0, m.weierstrass_image(k)));
        val -= m.weierstrass_weight() / (g * g * g) * s;
    }
    return val / g;
}

template <class Model>
double green_log_raw(const Model& m, const typename Model::Point& P,
                     const typename Model::Point& Q, double log_s,
                     const ThetaEvaluator& th) {
    return green_log_from_abel(m, m.abel(P), m.abel(Q), log_s, th);
}

template <class Model>
double green_log(const Model& m, const typename Model::Point& P,
                 const typename Model::Point& Q, double log_s) {
    if (m.is_weierstrass(P))
        throw singular_point_error(
            "green: first argument is a Weierstrass point, use the limit variant");
    return green_log_raw(m, P, Q, log_s, m.theta());
}

// G itself, with the diagonal pinned to zero
template <class Model>
double green_value(const Model& m, const typename Model::Point& P,
                   const typename Model::Point& Q, double log_s) {
    if (m.same_point(P, Q)) return 0.0;
    return std::exp(green_log(m, P, Q, log_s));
}

// log G(W,Q) at a Weierstrass point W, where the direct formula degenerates.
// Route A extrapolates log G(P_s, Q) along a ray P_s -> W with P_s - W
// proportional to s^2, so the extrapolated function is analytic in s (the
// local uniformizer is a square root of the chart displacement). Route B uses
// the exact formula with the arguments swapped when Q is regular, or the
// swapped limit when Q is itself a Weierstrass point. The routes must agree
// to 1e-3.
template <class Model>
double green_limit_at_weierstrass(const Model& m, const typename Model::Point& W,
                                  const typename Model::Point& Q, double log_s) {
    if (!m.is_weierstrass(W))
        throw invalid_input("green limit: first argument must be a Weierstrass point");
    if (m.same_point(W, Q)) return 0.0; // G vanishes on the diagonal

    ThetaEvaluator sharp(m.theta().siegel(), 1e-15);
    auto one_sided = [&](const typename Model::Point& at,
                         const typename Model::Point& other) {
        cdouble step = m.singular_clearance(at) * m.safe_ray(at);
        JacVec a_other = m.abel_tight(other);
        // anchor the hops at the outermost sample; every smaller s is one
        // straight leg along the approach ray from there
        auto base = m.displaced(at, step);
        JacVec a_base = m.abel_tight(base);
        auto F = [&](double s) {
            cdouble off = (s * s - 1.0) * step;
            JacVec a = std::abs(off) == 0.0 ? a_base : m.abel_step(base, a_base, off);
            return green_log_from_abel(m, a, a_other, log_s, sharp);
        };
        double err = 0.0;
        return richardson_limit(F, 1.0, 1e-8, 10, &err, 1e-5);
    };

    double a = one_sided(W, Q);
    double b = m.is_weierstrass(Q) ? one_sided(Q, W)
                                   : green_log_raw(m, Q, W, log_s, sharp);
    if (std::abs(a - b) > 1e-3 * std::max(1.0, std::abs(a)))
        throw numeric_degeneracy("green limit: extrapolation routes disagree",
                                 std::abs(a - b));
    return 0.5 * (a + b);
}

// log of the Arakelov norm of dz at P in the model chart:
//   log ||dz||_Ar(P) = lim_{h->0} [ log|h| - log G(P_h, P) ]
// since G vanishes to first order along the diagonal.
template <class Model>
double log_dz_arakelov(const Model& m, const typename Model::Point& P, double log_s) {
    if (m.is_weierstrass(P))
        throw singular_point_error("dz norm: chart is degenerate at a Weierstrass point");
    ThetaEvaluator sharp(m.theta().siegel(), 1e-15);
    double h0 = 0.3 * m.local_clearance(P);
    cdouble dir = std::polar(1.0, 0.377123);
    JacVec aP = m.abel_tight(P);
    auto F = [&](double h) {
        JacVec aPh = m.abel_step(P, aP, h * dir);
        return std::log(h) - green_log_from_abel(m, aPh, aP, log_s, sharp);
    };
    double err = 0.0;
    return richardson_limit(F, h0, 1e-8, 10, &err, 1e-5);
}

} // namespace arakelov
