#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/invariants/delta.hpp"
#include "arakelov/invariants/residuals.hpp"
#include "arakelov/invariants/s_invariant.hpp"
#include "arakelov/invariants/t_invariant.hpp"
#include "arakelov/numerics/rng.hpp"

namespace arakelov {

struct InvariantReport {
    int genus = 0;
    double log_s = 0.0, log_s_err = 0.0;
    double log_t_modular = 0.0, log_t_theta = 0.0, log_t_wronskian = 0.0;
    double t_spread = 0.0; // max pairwise difference between the three routes
    double delta = 0.0, log_r = 0.0;
    double faltings = 0.0, guardia = 0.0;
};

// Full pipeline at one curve: S, the three T routes, delta and R from the
// modular T, then the two identity residuals as end-to-end self-checks.
template <class Model>
InvariantReport compute_invariant_report(const Model& m, Rng& rng) {
    InvariantReport r{};
    int g = m.genus();
    r.genus = g;

    auto s = compute_s(m, m.random_regular_point(rng));
    r.log_s = s.log_s;
    r.log_s_err = s.err;

    r.log_t_modular = log_t_modular(m);
    r.log_t_theta = log_t_theta_deriv(m, rng);
    bool have_w = false;
    for (int attempt = 0; attempt < 5 && !have_w; ++attempt) {
        try {
            r.log_t_wronskian = log_t_wronskian(m, m.random_regular_point(rng));
            have_w = true;
        } catch (const genericity_error&) {
        }
    }
    if (!have_w)
        throw genericity_error("report: wronskian T found no usable point");
    double lo = std::min({r.log_t_modular, r.log_t_theta, r.log_t_wronskian});
    double hi = std::max({r.log_t_modular, r.log_t_theta, r.log_t_wronskian});
    r.t_spread = hi - lo;

    r.delta = compute_delta(r.log_s, r.log_t_modular, g);
    r.log_r = compute_r(r.log_s, r.delta);

    bool have_res = false;
    for (int attempt = 0; attempt < 10 && !have_res; ++attempt) {
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
            r.faltings = faltings_residual(m, pts, Q, r.log_s, r.delta);
            r.guardia = guardia_residual(m, pts, Q, r.log_s, r.delta);
            have_res = true;
        } catch (const genericity_error&) {
        }
    }
    if (!have_res)
        throw genericity_error("report: residual identities found no generic configuration");
    return r;
}

struct EllipticClosedForms {
    double log_s = 0.0, log_t = 0.0, delta = 0.0;
};

// Genus one admits eta-function closed forms; |eta|^3 is assembled from the
// three even theta constants, which keeps this an independent code path from
// the q-series used in the tests.
inline EllipticClosedForms elliptic_closed_forms(cdouble tau) {
    CMat mt(1, 1);
    mt.at(0, 0) = tau;
    SiegelPoint sp(mt);
    ThetaEvaluator th(sp, 1e-14);
    auto log_abs_theta = [&](int a, int b) {
        Characteristic c{{a}, {b}};
        return th.norm_log(c.point(sp)) - 0.25 * sp.log_det_Y;
    };
    double log_eta =
        (log_abs_theta(1, 0) + log_abs_theta(0, 0) + log_abs_theta(0, 1) - std::log(2.0)) / 3.0;
    const double two_pi = 6.283185307179586476925286766559;
    double im = tau.imag();
    EllipticClosedForms cf;
    cf.log_s = -0.25 * std::log(im) - log_eta;
    cf.delta = -(6.0 * std::log(im) + 24.0 * log_eta) - 8.0 * std::log(two_pi);
    cf.log_t = cf.delta / 4.0;
    return cf;
}

} // namespace arakelov
