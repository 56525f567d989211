#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/quad2d.hpp"
#include "arakelov/numerics/rng.hpp"
#include "arakelov/surface/abel_jacobi.hpp"
#include "arakelov/surface/wronskian.hpp"
#include "arakelov/theta/theta.hpp"

namespace arakelov {

// A hyperelliptic curve packaged for the invariant formulas: theta machinery
// over its period matrix, Abel map, Weierstrass images, and integration
// against the canonical (1,1)-form. The interface (genus/theta/kappa/abel/
// weierstrass_*/mu_average/frame accessors) is duck-typed and shared with
// TorusModel so every invariant routine is written once.
class HyperellipticModel {
  public:
    using Point = SurfacePoint;

    HyperellipticModel(const Poly& f, const QuadratureConfig& cfg,
                       std::vector<int> ordering = {})
        : HyperellipticModel(build_period_data(f, cfg, std::move(ordering)), cfg) {}

    HyperellipticModel(PeriodData pd, const QuadratureConfig& cfg)
        : cfg_(cfg), aj_(std::move(pd), abel_cfg(cfg)),
          theta_(aj_.periods().tau, cfg.theta_eps) {
        const PeriodData& p = aj_.periods();
        int g = p.curve.genus;
        weight_ = 0.5 * g * (g - 1);
        images_.reserve(static_cast<size_t>(2 * g + 2));
        for (int k = 1; k <= 2 * g + 1; ++k)
            images_.push_back(branch_characteristic(k, g).point(p.tau));
        images_.emplace_back(static_cast<size_t>(g), 0.0); // infinity, the base point
    }

    int genus() const { return aj_.periods().curve.genus; }
    const PeriodData& periods() const { return aj_.periods(); }
    const Curve& curve() const { return aj_.periods().curve; }
    const ThetaEvaluator& theta() const { return theta_; }
    const JacVec& kappa() const { return aj_.periods().kappa; }
    const QuadratureConfig& config() const { return cfg_; }

    int weierstrass_count() const { return 2 * genus() + 2; }
    double weierstrass_weight() const { return weight_; }
    const JacVec& weierstrass_image(int k) const { return images_[static_cast<size_t>(k)]; }

    JacVec abel(const Point& P) const { return aj_.abel(P); }

    // Abel value resolved well past the working tolerance, for limit routines
    // whose theta arguments sit near a theta zero pinned by this value
    JacVec abel_tight(const Point& P) const {
        QuadratureConfig t = abel_cfg(cfg_);
        t.quad_rel_tol = std::min(t.quad_rel_tol, 1e-13);
        t.quad_abs_floor = 1e-13;
        t.max_depth = std::max(t.max_depth, 44);
        return aj_.abel(P, t);
    }

    // A(displaced(P, h)) by a single straight hop from a known A(P); the
    // quadrature error scales with |h|, so extrapolations in h see a flat
    // noise floor instead of one growing like 1/|h|
    JacVec abel_step(const Point& P, const JacVec& aP, cdouble h) const {
        Point Ph = displaced(P, h);
        JacVec a = aP;
        auto r = aj_.continue_along(0, P.x, P.sheet, Ph.x, a);
        if (!r.ok) return abel(Ph); // hop brushed a ramification point
        return a;
    }

    bool is_weierstrass(const Point& P) const {
        if (P.at_infinity) return true;
        const Curve& c = curve();
        double tol = 1e-6 * std::max(c.scale, 1.0);
        for (cdouble b : c.branch)
            if (std::abs(P.x - b) < tol) return true;
        return false;
    }

    bool same_point(const Point& P, const Point& Q) const {
        if (P.at_infinity || Q.at_infinity) return P.at_infinity && Q.at_infinity;
        return P.sheet == Q.sheet &&
               std::abs(P.x - Q.x) < 1e-11 * std::max(curve().scale, 1.0);
    }

    // same analytic branch shifted by h in the x chart; the stored sheet flag
    // is adjusted for any reference cuts the straight displacement crosses
    Point displaced(const Point& P, cdouble h) const {
        if (P.at_infinity) throw invalid_input("displaced: infinity has no x chart");
        ReferenceSheet sh = ReferenceSheet::x_chart(curve());
        auto xs = cut_crossings(P.x, P.x + h, sh);
        int sheet = (xs.size() % 2) ? -P.sheet : P.sheet;
        return Point::finite(P.x + h, sheet);
    }

    cdouble chart_coord(const Point& P) const {
        if (P.at_infinity) throw invalid_input("chart_coord: infinity has no x chart");
        return P.x;
    }

    // distance to the nearest branch point, nonzero for regular points
    double local_clearance(const Point& P) const {
        const Curve& c = curve();
        double d = c.r_disk;
        for (cdouble b : c.branch) d = std::min(d, std::abs(P.x - b));
        return d;
    }

    // safe displacement radius around the branch point nearest to P, for
    // limits that approach a Weierstrass point
    double singular_clearance(const Point& P) const {
        if (P.at_infinity)
            throw invalid_input("singular clearance: infinity has no x chart");
        const Curve& c = curve();
        size_t best = 0;
        double bd = 1e300;
        for (size_t i = 0; i < c.branch.size(); ++i) {
            double d = std::abs(P.x - c.branch[i]);
            if (d < bd) { bd = d; best = i; }
        }
        return c.clearance[best];
    }

    // unit ray that leaves a branch point without meeting the local cut
    cdouble safe_ray(const Point&) const {
        return std::polar(1.0, curve().cut_angle + 2.2);
    }

    std::vector<cdouble> frame_values(const Point& P) const {
        return orthonormal_frame_values(periods(), P);
    }
    cdouble wronskian_value(const Point& P) const {
        return wronskian_orthonormal(periods(), P);
    }

    // uniform over a centred disk, rejecting the safety discs around branch
    // points; the sheet takes one extra draw so the stream layout is fixed
    Point random_regular_point(Rng& rng) const {
        const Curve& c = curve();
        const double two_pi = 6.283185307179586476925286766559;
        double rmax = std::min(2.0, 0.75 * c.r_disk);
        for (int tries = 0; tries < 256; ++tries) {
            double u = rng.uniform(), th = rng.uniform(0.0, two_pi);
            cdouble x = std::polar(rmax * std::sqrt(u), th);
            bool ok = true;
            for (size_t j = 0; j < c.branch.size(); ++j)
                if (std::abs(x - c.branch[j]) < 0.45 * c.clearance[j]) { ok = false; break; }
            if (!ok) continue;
            int sheet = (rng.next_u64() & 1) ? +1 : -1;
            return Point::finite(x, sheet);
        }
        throw genericity_error("random point: branch discs fill the sampling disk");
    }

    // canonical (1,1)-form density in the x chart, per sheet, against du dv
    double mu_density(cdouble x) const {
        const Curve& c = curve();
        for (cdouble b : c.branch)
            if (std::abs(x - b) < 1e-9 * std::max(c.scale, 1.0))
                throw singular_point_error("mu density: branch point");
        const PeriodData& pd = periods();
        int g = c.genus;
        cdouble q = 0.0;
        std::vector<cdouble> v(static_cast<size_t>(g));
        cdouble p = 1.0;
        for (int l = 0; l < g; ++l) { v[static_cast<size_t>(l)] = p; p *= x; }
        for (int m = 0; m < g; ++m)
            for (int l = 0; l < g; ++l)
                q += pd.gram_inv.at(m, l) * v[static_cast<size_t>(l)] *
                     std::conj(v[static_cast<size_t>(m)]);
        return q.real() / (g * std::abs(c.f.eval(x)));
    }

    // integral of F(A(Q)) over the surface against mu. F is evaluated on both
    // lifts through F(a) + F(-a); singular_at lists the points where F blows
    // up (integrably). Abel values are transported node to node, one hop deep
    // from a per-chart anchor at every batch head.
    double mu_average(const std::function<double(const JacVec&)>& F,
                      const std::vector<Point>& singular_at,
                      double* err_out = nullptr) const {
        double total = 0.0, err = 0.0;
        for (int chart = 0; chart < 2; ++chart) {
            double e = 0.0;
            total += chart_integral(chart, F, singular_at, &e);
            err += e;
        }
        if (err_out) *err_out = err;
        return total;
    }

    double mu_mass(double* err_out = nullptr) const {
        return mu_average([](const JacVec&) { return 1.0; }, {}, err_out);
    }

  private:
    static QuadratureConfig abel_cfg(const QuadratureConfig& cfg) {
        QuadratureConfig c = cfg;
        // node-local transport must outresolve the area quadrature, and legs
        // ending deep inside a singular fan need the extra bisection depth.
        // The absolute floor absorbs the x - b cancellation noise next to a
        // root, where no relative tolerance is reachable; legs sum into O(1)
        // Abel coordinates, so 1e-12 of slack per panel is invisible.
        c.quad_rel_tol = std::min(1e-8, 0.01 * cfg.quad_rel_tol);
        c.quad_abs_floor = std::max(cfg.quad_abs_floor, 1e-12);
        c.max_depth = std::max(cfg.max_depth, 36);
        return c;
    }

    struct ChainState {
        bool anchor_set = false;
        cdouble anchor_z;
        int anchor_sheet = +1;
        JacVec anchor_a;
        bool valid = false;
        cdouble z;
        int sheet = +1;
        JacVec a;
    };

    double chart_radius(int chart) const {
        return chart == 0 ? curve().r_disk : 1.0 / curve().r_disk;
    }

    const std::vector<cdouble>& chart_roots(int chart) const {
        return chart == 0 ? curve().branch : curve().t_roots;
    }

    double rho(int chart, cdouble z) const {
        const PeriodData& pd = periods();
        int g = curve().genus;
        std::vector<cdouble> v(static_cast<size_t>(g));
        cdouble p = 1.0;
        if (chart == 0) {
            for (int l = 0; l < g; ++l) { v[static_cast<size_t>(l)] = p; p *= z; }
        } else {
            for (int l = g - 1; l >= 0; --l) { v[static_cast<size_t>(l)] = p; p *= z; }
        }
        cdouble q = 0.0;
        for (int m = 0; m < g; ++m)
            for (int l = 0; l < g; ++l)
                q += pd.gram_inv.at(m, l) * v[static_cast<size_t>(l)] *
                     std::conj(v[static_cast<size_t>(m)]);
        const Poly& den = chart == 0 ? curve().f : curve().G;
        return q.real() / (g * std::abs(den.eval(z)));
    }

    void fresh_state(int chart, ChainState& cs, cdouble z) const {
        auto res = chart == 0 ? aj_.abel_x(z) : aj_.abel_t(z);
        cs.z = z;
        cs.a = std::move(res.first);
        cs.sheet = res.second;
        cs.valid = true;
    }

    void ensure_anchor(int chart, ChainState& cs) const {
        if (cs.anchor_set) return;
        double R = chart_radius(chart);
        const auto& roots = chart_roots(chart);
        cdouble best = 0.45 * R;
        double best_d = -1.0;
        for (int m = 0; m < 40; ++m) {
            cdouble cand = std::polar((0.31 + 0.011 * m) * R, 0.9 + 0.41 * m);
            double d = R;
            for (cdouble r : roots) d = std::min(d, std::abs(cand - r));
            if (d > best_d) { best_d = d; best = cand; }
            if (d > 0.2 * R) break;
        }
        fresh_state(chart, cs, best);
        cs.anchor_set = true;
        cs.anchor_z = cs.z;
        cs.anchor_sheet = cs.sheet;
        cs.anchor_a = cs.a;
    }

    void step_to(int chart, ChainState& cs, cdouble z, bool batch_head) const {
        ensure_anchor(chart, cs);
        if (!cs.valid) {
            JacVec a = cs.anchor_a;
            HopResult hr = aj_.continue_along(chart, cs.anchor_z, cs.anchor_sheet, z, a);
            if (hr.ok) {
                cs.z = z; cs.a = std::move(a); cs.sheet = hr.sheet; cs.valid = true;
                return;
            }
            fresh_state(chart, cs, z);
            return;
        }
        (void)batch_head; // adjacent batches stay chainable, hop from the tail
        JacVec a = cs.a;
        HopResult hr = aj_.continue_along(chart, cs.z, cs.sheet, z, a);
        if (hr.ok) {
            cs.z = z; cs.a = std::move(a); cs.sheet = hr.sheet;
            return;
        }
        a = cs.anchor_a;
        hr = aj_.continue_along(chart, cs.anchor_z, cs.anchor_sheet, z, a);
        if (hr.ok) {
            cs.z = z; cs.a = std::move(a); cs.sheet = hr.sheet;
            return;
        }
        fresh_state(chart, cs, z);
    }

    double chart_integral(int chart, const std::function<double(const JacVec&)>& F,
                          const std::vector<Point>& singular_at, double* err_out) const {
        const double two_pi = 6.283185307179586476925286766559;
        double R = chart_radius(chart);
        int g = curve().genus;

        // polar angles of everything the quadtree must isolate; the chart
        // centre itself is resolved by the polar parametrisation
        std::vector<cdouble> marks;
        for (cdouble r : chart_roots(chart))
            if (std::abs(r) > 1e-14 * R && std::abs(r) <= R * (1.0 + 1e-12))
                marks.push_back(r);
        for (const Point& P : singular_at) {
            if (P.at_infinity)
                throw invalid_input("mu integral: singular point at the base point");
            cdouble z = chart == 0 ? P.x : 1.0 / P.x;
            double lim = chart == 0 ? curve().r_disk : 1.0 / curve().r_disk;
            if ((chart == 0) == (std::abs(P.x) <= curve().r_disk) &&
                std::abs(z) <= lim * (1.0 + 1e-12))
                marks.push_back(z);
        }

        // seam angle chosen so no marked point sits near v = 0/1
        double theta0 = 0.2345678;
        {
            double best_gap = -1.0;
            for (int m = 0; m < 97; ++m) {
                double cand = 0.2345678 + static_cast<double>(m) / 97.0;
                double gap = 1.0;
                for (cdouble r : marks) {
                    double v = std::arg(r) / two_pi - cand;
                    v -= std::floor(v);
                    gap = std::min(gap, std::min(v, 1.0 - v));
                }
                if (gap > best_gap) { best_gap = gap; theta0 = cand; }
                if (gap > 0.05) break;
            }
        }

        Quad2DRegion region{0.0, 1.0, 0.0, 1.0, {}};
        for (cdouble r : marks) {
            double v = std::arg(r) / two_pi - theta0;
            v -= std::floor(v);
            region.singular.push_back({std::abs(r) / R, v});
        }

        ChainState cs;
        std::vector<cdouble> buf;
        BatchFn2D fn = [&](const double* u, const double* v, int count, cdouble* out) {
            for (int i = 0; i < count; ++i) {
                cdouble z = std::polar(R * u[i], two_pi * (v[i] + theta0));
                step_to(chart, cs, z, i == 0);
                double val = F(cs.a);
                buf.assign(cs.a.begin(), cs.a.end());
                for (int k = 0; k < g; ++k) buf[static_cast<size_t>(k)] = -buf[static_cast<size_t>(k)];
                val += F(buf);
                out[i] = val * rho(chart, z) * (two_pi * R * R * u[i]);
            }
        };
        cdouble I = quad2d_adaptive(fn, region, cfg_, err_out);
        return I.real();
    }

    QuadratureConfig cfg_;
    AbelJacobi aj_;
    ThetaEvaluator theta_;
    double weight_ = 0.0;
    std::vector<JacVec> images_;
};

// class of a degree g-1 divisor in Pic_{g-1}, i.e. Abel sum plus the Riemann
// vector; the theta divisor is exactly the effective classes
template <class Model>
JacVec divisor_to_pic(const Model& m,
                      const std::vector<std::pair<typename Model::Point, int>>& divisor) {
    int g = m.genus(), deg = 0;
    for (const auto& term : divisor) deg += term.second;
    if (deg != g - 1)
        throw invalid_input("divisor_to_pic: divisor degree must be g-1");
    JacVec z = m.kappa();
    for (const auto& term : divisor) {
        JacVec a = m.abel(term.first);
        for (int i = 0; i < g; ++i)
            z[static_cast<size_t>(i)] += static_cast<double>(term.second) * a[static_cast<size_t>(i)];
    }
    return z;
}

} // namespace arakelov
