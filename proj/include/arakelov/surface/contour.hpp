#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/gauss.hpp"
#include "arakelov/surface/sheet.hpp"

namespace arakelov {

// fills out[0..dim) with the numerator functions at x
using Numerators = std::function<void(cdouble x, cdouble* out)>;

struct SegmentResult {
    std::vector<cdouble> integral; // of N_k(x) dx / (sigma y_ref(x))
    int sigma_end = +1;            // sheet on arrival, continued from the anchor
};

namespace detail {

// sigma as a function of the substituted parameter: anchor value times a flip
// for every cut crossing between anchor and u
struct FlipTrack {
    std::vector<double> flips; // sorted
    double anchor;
    int anchor_sigma;
    double span;

    int sigma(double u) const {
        double lo = std::min(anchor, u), hi = std::max(anchor, u);
        int n = 0;
        for (double f : flips)
            if (f > lo && f <= hi) ++n;
        return (n % 2) ? -anchor_sigma : anchor_sigma;
    }

    // keep evaluation nodes off the flip parameters so the combinatorial side
    // and the floating point side of each cut agree
    double nudge(double u) const {
        for (double f : flips)
            if (std::abs(u - f) < 1e-12 * span)
                return (u < f) ? f - 1e-9 * span : f + 1e-9 * span;
        return u;
    }
};

inline std::vector<cdouble> run_adaptive(const VecIntegrand& f, double a, double b,
                                         int dim, const QuadratureConfig& cfg) {
    return adaptive_gl_vec(f, a, b, dim, cfg);
}

} // namespace detail

// straight segment between two regular points
inline SegmentResult segment_integral_plain(const ReferenceSheet& sheet,
                                            const Numerators& num, int dim, cdouble p,
                                            cdouble q, int sigma_at_p,
                                            const QuadratureConfig& cfg) {
    auto xs = cut_crossings(p, q, sheet);
    detail::FlipTrack ft;
    for (const auto& c : xs) ft.flips.push_back(c.t);
    ft.anchor = 0.0;
    ft.anchor_sigma = sigma_at_p;
    ft.span = 1.0;

    std::vector<cdouble> nbuf(static_cast<size_t>(dim));
    VecIntegrand f = [&](double t, cdouble* out) {
        double u = ft.nudge(t);
        cdouble x = p + (q - p) * u;
        num(x, nbuf.data());
        cdouble denom = static_cast<double>(ft.sigma(u)) * sheet.eval(x);
        cdouble fac = (q - p) / denom;
        for (int k = 0; k < dim; ++k) out[k] = nbuf[static_cast<size_t>(k)] * fac;
    };
    SegmentResult r;
    r.integral = detail::run_adaptive(f, 0.0, 1.0, dim, cfg);
    r.sigma_end = ft.sigma(1.0);
    return r;
}

// segment starting at the branch point sheet.pts[p_index]; sigma_after_start
// fixes the lift just after leaving the ramification point
inline SegmentResult segment_integral_sqrt_start(const ReferenceSheet& sheet,
                                                 const Numerators& num, int dim,
                                                 int p_index, cdouble q,
                                                 int sigma_after_start,
                                                 const QuadratureConfig& cfg) {
    cdouble p = sheet.pts[static_cast<size_t>(p_index)];
    auto xs = cut_crossings(p, q, sheet);
    detail::FlipTrack ft;
    for (const auto& c : xs) ft.flips.push_back(std::sqrt(c.t)); // t = u^2
    std::sort(ft.flips.begin(), ft.flips.end());
    ft.anchor = 0.0;
    ft.anchor_sigma = sigma_after_start;
    ft.span = 1.0;

    cdouble root_dir = rotated_sqrt(q - p, sheet.alpha);
    std::vector<cdouble> nbuf(static_cast<size_t>(dim));
    VecIntegrand f = [&](double t, cdouble* out) {
        double u = ft.nudge(t);
        cdouble x = p + (q - p) * (u * u);
        num(x, nbuf.data());
        cdouble denom = static_cast<double>(ft.sigma(u)) * root_dir *
                        sheet.eval_skipping(x, p_index, -1);
        cdouble fac = 2.0 * (q - p) / denom;
        for (int k = 0; k < dim; ++k) out[k] = nbuf[static_cast<size_t>(k)] * fac;
    };
    SegmentResult r;
    r.integral = detail::run_adaptive(f, 0.0, 1.0, dim, cfg);
    r.sigma_end = ft.sigma(1.0);
    return r;
}

// segment ending at the branch point sheet.pts[q_index]
inline SegmentResult segment_integral_sqrt_end(const ReferenceSheet& sheet,
                                               const Numerators& num, int dim, cdouble p,
                                               int q_index, int sigma_at_p,
                                               const QuadratureConfig& cfg) {
    cdouble q = sheet.pts[static_cast<size_t>(q_index)];
    auto xs = cut_crossings(p, q, sheet);
    detail::FlipTrack ft;
    for (const auto& c : xs) ft.flips.push_back(std::sqrt(1.0 - c.t)); // t = 1 - u^2
    std::sort(ft.flips.begin(), ft.flips.end());
    ft.anchor = 1.0; // u = 1 is the p end
    ft.anchor_sigma = sigma_at_p;
    ft.span = 1.0;

    cdouble root_dir = rotated_sqrt(p - q, sheet.alpha);
    std::vector<cdouble> nbuf(static_cast<size_t>(dim));
    VecIntegrand f = [&](double t, cdouble* out) {
        double u = ft.nudge(t);
        cdouble x = q + (p - q) * (u * u);
        num(x, nbuf.data());
        cdouble denom = static_cast<double>(ft.sigma(u)) * root_dir *
                        sheet.eval_skipping(x, q_index, -1);
        cdouble fac = 2.0 * (q - p) / denom;
        for (int k = 0; k < dim; ++k) out[k] = nbuf[static_cast<size_t>(k)] * fac;
    };
    SegmentResult r;
    r.integral = detail::run_adaptive(f, 0.0, 1.0, dim, cfg);
    r.sigma_end = ft.sigma(0.0); // parity bookkeeping only; q is a ramification point
    return r;
}

// segment joining two branch points, anchored sigma at the midpoint; this is
// the collapsed loop primitive: a cycle around the pair integrates to twice
// this value
inline SegmentResult segment_integral_sqrt_both(const ReferenceSheet& sheet,
                                                const Numerators& num, int dim,
                                                int p_index, int q_index,
                                                int sigma_at_mid,
                                                const QuadratureConfig& cfg) {
    const double pi = 3.14159265358979323846264338328;
    cdouble p = sheet.pts[static_cast<size_t>(p_index)];
    cdouble q = sheet.pts[static_cast<size_t>(q_index)];
    cdouble m = 0.5 * (p + q), rr = 0.5 * (q - p);
    auto xs = cut_crossings(p, q, sheet);
    detail::FlipTrack ft;
    for (const auto& c : xs) ft.flips.push_back(std::asin(2.0 * c.t - 1.0));
    std::sort(ft.flips.begin(), ft.flips.end());
    ft.anchor = 0.0; // s = 0 is the midpoint
    ft.anchor_sigma = sigma_at_mid;
    ft.span = pi;

    cdouble root_fac = rotated_sqrt(rr, sheet.alpha) * rotated_sqrt(-rr, sheet.alpha);
    std::vector<cdouble> nbuf(static_cast<size_t>(dim));
    VecIntegrand f = [&](double t, cdouble* out) {
        double s = ft.nudge(t);
        cdouble x = m + rr * std::sin(s);
        num(x, nbuf.data());
        cdouble denom = static_cast<double>(ft.sigma(s)) * root_fac *
                        sheet.eval_skipping(x, p_index, q_index);
        cdouble fac = rr / denom;
        for (int k = 0; k < dim; ++k) out[k] = nbuf[static_cast<size_t>(k)] * fac;
    };
    SegmentResult r;
    r.integral = detail::run_adaptive(f, -0.5 * pi, 0.5 * pi, dim, cfg);
    r.sigma_end = ft.sigma(0.5 * pi);
    return r;
}

} // namespace arakelov
