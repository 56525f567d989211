#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/surface/contour.hpp"
#include "arakelov/surface/periods.hpp"
#include "arakelov/theta/characteristics.hpp"

namespace arakelov {

namespace detail {

// polyline from a to b keeping 0.9 of the safety radius around every branch
// point, unless an endpoint itself sits next to one (staging legs do)
inline void route_rec(const Curve& c, cdouble a, cdouble b, std::vector<cdouble>& out,
                      int depth) {
    double scale = std::max(c.scale, 1.0);
    if (std::abs(b - a) <= 1e-13 * scale) {
        out.push_back(b);
        return;
    }
    if (depth > 16) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "abel: routing did not settle near (%.17g, %.17g) -> (%.17g, %.17g)",
                      a.real(), a.imag(), b.real(), b.imag());
        throw path_refinement_error(msg);
    }
    int worst = -1;
    double worst_ratio = 0.9;
    for (size_t j = 0; j < c.branch.size(); ++j) {
        cdouble bj = c.branch[j];
        double d = point_segment_distance(bj, a, b);
        double de = std::min(std::abs(a - bj), std::abs(b - bj));
        // staging legs end next to their branch point; a leg whose closest
        // approach is the endpoint itself only approaches, it never crosses
        if (de < 1.02 * c.clearance[j] && (d > 1e-9 * scale || d >= 0.999 * de)) continue;
        double ratio = d / c.clearance[j];
        if (ratio < worst_ratio) {
            worst_ratio = ratio;
            worst = static_cast<int>(j);
        }
    }
    if (worst < 0) {
        out.push_back(b);
        return;
    }
    cdouble bj = c.branch[static_cast<size_t>(worst)];
    cdouble u = (b - a) / std::abs(b - a);
    double along = ((bj - a) * std::conj(u)).real();
    along = std::clamp(along, 0.0, std::abs(b - a));
    cdouble foot = a + u * along;
    cdouble d = foot - bj;
    cdouble dir = std::abs(d) < 1e-12 * scale ? u * cdouble(0.0, 1.0) : d / std::abs(d);
    cdouble w = bj + 1.4 * c.clearance[static_cast<size_t>(worst)] * dir;
    route_rec(c, a, w, out, depth + 1);
    route_rec(c, w, b, out, depth + 1);
}

inline std::vector<cdouble> route(const Curve& c, cdouble a, cdouble b) {
    std::vector<cdouble> out{a};
    route_rec(c, a, b, out, 0);
    return out;
}

} // namespace detail

struct HopResult {
    bool ok = false;
    int sheet = 0;
};

// Abel map with base point at infinity, odd degree models only. Paths run
// from t = 0 in the far chart, hand over at the junction circle and continue
// through the branch point arrangement on polylines.
class AbelJacobi {
  public:
    AbelJacobi(PeriodData pd, QuadratureConfig cfg)
        : pd_(std::move(pd)), cfg_(cfg), x_sheet_(ReferenceSheet::x_chart(pd_.curve)),
          t_sheet_(ReferenceSheet::t_chart(pd_.curve)) {
        if (pd_.curve.degree % 2 == 0)
            throw invalid_input("AbelJacobi: base point needs a ramified infinity");
        t0_index_ = -1;
        for (size_t i = 0; i < pd_.curve.t_roots.size(); ++i)
            if (std::abs(pd_.curve.t_roots[i]) == 0.0) t0_index_ = static_cast<int>(i);
        if (t0_index_ < 0)
            throw invalid_input("AbelJacobi: missing ramification point at t = 0");
    }

    const PeriodData& periods() const { return pd_; }

    JacVec abel(const SurfacePoint& P) const { return abel(P, cfg_); }

    JacVec abel(const SurfacePoint& P, const QuadratureConfig& cfg) const {
        int g = pd_.curve.genus;
        if (P.at_infinity) return JacVec(static_cast<size_t>(g), 0.0);

        double scale = std::max(pd_.curve.scale, 1.0);
        int bidx = -1;
        for (size_t j = 0; j < pd_.curve.branch.size(); ++j)
            if (std::abs(P.x - pd_.curve.branch[j]) < 1e-12 * scale)
                bidx = static_cast<int>(j);

        cdouble target = P.x;
        if (bidx >= 0) target = staging_point(bidx);

        double theta = std::abs(target) < 1e-12 * scale ? 0.7 : std::arg(target);
        // a radial leg collinear with the cut ray out of a root at the origin
        // is sign-ambiguous at every node; slant the junction point off it
        const double pi = 3.14159265358979323846264338328;
        double skew = std::remainder(theta - pi - pd_.curve.cut_angle, 2.0 * pi);
        if (std::abs(skew) < 0.01) theta += skew >= 0.0 ? 0.03 : -0.03;
        cdouble x1 = std::polar(pd_.curve.r_junction, theta);
        cdouble t1 = 1.0 / x1;

        auto tres = segment_integral_sqrt_start(t_sheet_, t_num(), g, t0_index_, t1, +1, cfg);
        JacVec raw = tres.integral;

        int sigma = junction_sheet(t1, tres.sigma_end, x1);

        auto pts = detail::route(pd_.curve, x1, target);
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            auto r = segment_integral_plain(x_sheet_, x_num(), g, pts[i], pts[i + 1], sigma,
                                            cfg);
            for (int k = 0; k < g; ++k) raw[static_cast<size_t>(k)] += r.integral[static_cast<size_t>(k)];
            sigma = r.sigma_end;
        }

        if (bidx >= 0) {
            auto r = segment_integral_sqrt_end(x_sheet_, x_num(), g, target, bidx, sigma, cfg);
            for (int k = 0; k < g; ++k) raw[static_cast<size_t>(k)] += r.integral[static_cast<size_t>(k)];
        } else if (sigma != P.sheet) {
            for (auto& v : raw) v = -v; // the conjugate lift was reached
        }
        return normalise(raw);
    }

    // Abel value over t in the far chart, lift continued with sigma = +1 off
    // the ramification point at t = 0; second member is the arrival sheet
    std::pair<JacVec, int> abel_t(cdouble t) const {
        int g = pd_.curve.genus;
        auto r = segment_integral_sqrt_start(t_sheet_, t_num(), g, t0_index_, t, +1, cfg_);
        return {normalise(r.integral), r.sigma_end};
    }

    std::pair<JacVec, int> abel_x(cdouble x) const {
        return {abel(SurfacePoint::finite(x, +1)), +1};
    }

    // transports an Abel value along the straight hop z0 -> z1 in the given
    // chart (0 = x, 1 = t); declines hops that brush a ramification point
    HopResult continue_along(int chart, cdouble z0, int sheet0, cdouble z1, JacVec& a) const {
        const ReferenceSheet& sh = chart == 0 ? x_sheet_ : t_sheet_;
        const auto& roots = chart == 0 ? pd_.curve.branch : pd_.curve.t_roots;
        double cscale = chart == 0 ? std::max(pd_.curve.scale, 1.0) : 1.0 / pd_.curve.r_disk;
        for (cdouble r : roots) {
            double dseg = detail::point_segment_distance(r, z0, z1);
            double dend = std::min(std::abs(z0 - r), std::abs(z1 - r));
            if (dseg < 0.02 * dend || dseg < 1e-13 * cscale) return {};
        }
        int g = pd_.curve.genus;
        try {
            auto res = segment_integral_plain(sh, chart == 0 ? x_num() : t_num(), g, z0, z1,
                                              sheet0, cfg_);
            JacVec inc = normalise(res.integral);
            for (int k = 0; k < g; ++k) a[static_cast<size_t>(k)] += inc[static_cast<size_t>(k)];
            return {true, res.sigma_end};
        } catch (const path_refinement_error&) {
            return {};
        } catch (const convergence_error&) {
            return {};
        }
    }

    // lift over x1 matching the sheet carried across the junction from t1
    int junction_sheet(cdouble t1, int sigma_t, cdouble x1) const {
        int g = pd_.curve.genus;
        cdouble y1 = static_cast<double>(sigma_t) * t_sheet_.eval(t1) / std::pow(t1, g + 1);
        cdouble ratio = y1 / x_sheet_.eval(x1);
        int sx = ratio.real() > 0.0 ? +1 : -1;
        if (std::abs(ratio - static_cast<double>(sx)) > 1e-6)
            throw numeric_degeneracy("abel: chart junction sheets disagree",
                                     std::abs(ratio - static_cast<double>(sx)));
        return sx;
    }

    cdouble staging_point(int bidx) const {
        const Curve& c = pd_.curve;
        double ang = c.cut_angle + 2.2;
        return c.branch[static_cast<size_t>(bidx)] +
               std::polar(c.clearance[static_cast<size_t>(bidx)], ang);
    }

  private:
    JacVec normalise(const std::vector<cdouble>& raw) const {
        int g = pd_.curve.genus;
        JacVec a(static_cast<size_t>(g), 0.0);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                a[static_cast<size_t>(i)] += pd_.a_inv.at(i, j) * raw[static_cast<size_t>(j)];
        return a;
    }

    Numerators x_num() const {
        int g = pd_.curve.genus;
        return [g](cdouble x, cdouble* out) {
            cdouble p = 1.0;
            for (int k = 0; k < g; ++k) {
                out[k] = p;
                p *= x;
            }
        };
    }

    Numerators t_num() const {
        int g = pd_.curve.genus;
        return [g](cdouble t, cdouble* out) {
            cdouble p = -1.0;
            for (int k = g - 1; k >= 0; --k) {
                out[k] = p;
                p *= t;
            }
        };
    }

    PeriodData pd_;
    QuadratureConfig cfg_;
    ReferenceSheet x_sheet_, t_sheet_;
    int t0_index_ = -1;
};

// certificate: every finite branch point must land on its tabulated theta
// characteristic (odd-degree models only; even-degree tables would need a
// different base point)
inline void verify_half_periods(const PeriodData& pd, const QuadratureConfig& cfg) {
    if (pd.curve.degree % 2 != 1) return;
    QuadratureConfig tight = cfg;
    tight.quad_rel_tol = std::min(cfg.quad_rel_tol, 1e-9);
    AbelJacobi aj(pd, tight);
    int g = pd.curve.genus;
    for (int k = 1; k <= 2 * g + 1; ++k) {
        SurfacePoint bp = SurfacePoint::finite(pd.curve.branch[static_cast<size_t>(k - 1)], +1);
        JacVec a = aj.abel(bp);
        JacVec eta = branch_characteristic(k, g).point(pd.tau);
        for (int i = 0; i < g; ++i) a[static_cast<size_t>(i)] -= eta[static_cast<size_t>(i)];
        double dist = lattice_distance(pd.tau, a);
        if (dist > 1e-5)
            throw basis_inconsistency_error(
                "periods: branch point misses its half period characteristic");
    }
}

// periods plus the half-period certificate. Retries once with an angular
// ordering when the straight chain refuses to close up.
inline PeriodData build_period_data(const Poly& f, const QuadratureConfig& cfg,
                                    std::vector<int> ordering = {}) {
    PeriodData pd = [&]() {
        try {
            Curve c = build_curve(f, ordering);
            return build_periods_raw(std::move(c), cfg, ordering);
        } catch (const basis_inconsistency_error&) {
            if (!ordering.empty()) throw;
            Curve plain = build_curve(f);
            cdouble centroid = 0.0;
            for (cdouble b : plain.branch) centroid += b;
            centroid /= static_cast<double>(plain.branch.size());
            std::vector<int> perm(plain.branch.size());
            for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
            std::sort(perm.begin(), perm.end(), [&](int i, int j) {
                cdouble u = plain.branch[static_cast<size_t>(i)] - centroid;
                cdouble v = plain.branch[static_cast<size_t>(j)] - centroid;
                if (std::arg(u) != std::arg(v)) return std::arg(u) < std::arg(v);
                return std::abs(u) < std::abs(v);
            });
            Curve c = build_curve(f, perm);
            return build_periods_raw(std::move(c), cfg, perm);
        }
    }();

    verify_half_periods(pd, cfg);
    return pd;
}

} // namespace arakelov
