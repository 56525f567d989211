#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/quad2d.hpp"
#include "arakelov/numerics/rng.hpp"
#include "arakelov/surface/periods.hpp"
#include "arakelov/theta/theta.hpp"

namespace arakelov {

// Elliptic curve C/(Z + tau Z) with the same duck-typed interface as
// HyperellipticModel, so the invariant routines can be cross-checked against
// eta-function closed forms. Points are lattice coordinates z.
class TorusModel {
  public:
    using Point = cdouble;

    TorusModel(cdouble tau, const QuadratureConfig& cfg)
        : cfg_(cfg), theta_(one_by_one(tau), cfg.theta_eps) {
        tau_ = tau;
        kappa_ = {0.5 * (1.0 + tau)};
        images_ = {{0.0}, {0.5}, {0.5 * tau}, {0.5 * (1.0 + tau)}};
    }

    int genus() const { return 1; }
    cdouble tau() const { return tau_; }
    const ThetaEvaluator& theta() const { return theta_; }
    const JacVec& kappa() const { return kappa_; }
    const QuadratureConfig& config() const { return cfg_; }

    int weierstrass_count() const { return 4; }
    double weierstrass_weight() const { return 0.0; }
    const JacVec& weierstrass_image(int k) const { return images_[static_cast<size_t>(k)]; }

    JacVec abel(const Point& z) const { return {z}; }
    JacVec abel_tight(const Point& z) const { return {z}; }
    JacVec abel_step(const Point&, const JacVec& aP, cdouble h) const {
        return {aP[0] + h};
    }

    bool is_weierstrass(const Point& z) const {
        for (const JacVec& w : images_)
            if (lattice_distance(theta_.siegel(), {z - w[0]}) < 1e-6) return true;
        return false;
    }

    bool same_point(const Point& a, const Point& b) const {
        return lattice_distance(theta_.siegel(), {a - b}) < 1e-11;
    }

    Point displaced(const Point& z, cdouble h) const { return z + h; }
    cdouble chart_coord(const Point& z) const { return z; }

    double local_clearance(const Point& z) const {
        double d = 1.0;
        for (const JacVec& w : images_)
            d = std::min(d, lattice_distance(theta_.siegel(), {z - w[0]}));
        return d;
    }

    double singular_clearance(const Point&) const {
        double d = 1e300;
        for (size_t i = 0; i < images_.size(); ++i)
            for (size_t j = 0; j < i; ++j)
                d = std::min(d, lattice_distance(theta_.siegel(),
                                                 {images_[i][0] - images_[j][0]}));
        return 0.35 * d;
    }

    cdouble safe_ray(const Point&) const { return std::polar(1.0, 0.918273); }

    std::vector<cdouble> frame_values(const Point&) const {
        return {cdouble(1.0 / std::sqrt(tau_.imag()), 0.0)};
    }
    cdouble wronskian_value(const Point&) const {
        return cdouble(1.0 / std::sqrt(tau_.imag()), 0.0);
    }

    Point random_regular_point(Rng& rng) const {
        for (int tries = 0; tries < 256; ++tries) {
            double s = rng.uniform(0.05, 0.95), t = rng.uniform(0.05, 0.95);
            cdouble z = s + t * tau_;
            bool ok = true;
            for (const JacVec& w : images_)
                if (lattice_distance(theta_.siegel(), {z - w[0]}) < 0.05) { ok = false; break; }
            if (ok) return z;
        }
        throw genericity_error("random point: torus rejection loop exhausted");
    }

    double mu_density(cdouble) const { return 1.0 / tau_.imag(); }

    // flat measure ds dt on z = s + t tau; the origin is shifted so no
    // singular image sits near the unit-square seams (F is lattice periodic)
    double mu_average(const std::function<double(const JacVec&)>& F,
                      const std::vector<Point>& singular_at,
                      double* err_out = nullptr) const {
        std::vector<std::array<double, 2>> st;
        for (const Point& z : singular_at) {
            double t = z.imag() / tau_.imag();
            double s = z.real() - t * tau_.real();
            st.push_back({s - std::floor(s), t - std::floor(t)});
        }
        double s0 = seam_shift(st, 0), t0 = seam_shift(st, 1);

        Quad2DRegion region{0.0, 1.0, 0.0, 1.0, {}};
        for (const auto& p : st) {
            double u = p[0] - s0, v = p[1] - t0;
            region.singular.push_back({u - std::floor(u), v - std::floor(v)});
        }

        BatchFn2D fn = [&](const double* u, const double* v, int count, cdouble* out) {
            JacVec a(1);
            for (int i = 0; i < count; ++i) {
                a[0] = (u[i] + s0) + (v[i] + t0) * tau_;
                out[i] = F(a);
            }
        };
        cdouble I = quad2d_adaptive(fn, region, cfg_, err_out);
        return I.real();
    }

    double mu_mass(double* err_out = nullptr) const {
        return mu_average([](const JacVec&) { return 1.0; }, {}, err_out);
    }

  private:
    static SiegelPoint one_by_one(cdouble tau) {
        CMat m(1, 1);
        m.at(0, 0) = tau;
        return SiegelPoint(m);
    }

    static double seam_shift(const std::vector<std::array<double, 2>>& st, int axis) {
        double best = 0.0, best_gap = -1.0;
        for (int m = 0; m < 97; ++m) {
            double cand = static_cast<double>(m) / 97.0;
            double gap = 1.0;
            for (const auto& p : st) {
                double v = p[static_cast<size_t>(axis)] - cand;
                v -= std::floor(v);
                gap = std::min(gap, std::min(v, 1.0 - v));
            }
            if (gap > best_gap) { best_gap = gap; best = cand; }
            if (gap > 0.05) break;
        }
        return best;
    }

    QuadratureConfig cfg_;
    ThetaEvaluator theta_;
    cdouble tau_;
    JacVec kappa_;
    std::vector<JacVec> images_;
};

} // namespace arakelov
