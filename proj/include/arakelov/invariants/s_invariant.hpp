#pragma once

#include <cmath>

#include "arakelov/errors.hpp"
#include "arakelov/invariants/green.hpp"

namespace arakelov {

struct SResult {
    double log_s = 0.0;
    double err = 0.0; // propagated quadrature error estimate
};

// log S(X) through the theta-norm average over the canonical measure:
//
//   log S = -g^2 int ||.||(gP - Q) dmu(Q) + (w/g) sum_W ||.||(gP - W)
//
// for any regular reference point P; the result is P independent. The
// integrand has a single integrable log singularity at Q = P.
template <class Model>
SResult compute_s(const Model& m, const typename Model::Point& P) {
    if (m.is_weierstrass(P))
        throw singular_point_error("S: reference point must be regular");
    int g = m.genus();
    const ThetaEvaluator& th = m.theta();

    JacVec w = m.abel(P);
    for (auto& c : w) c *= static_cast<double>(g);
    detail::vec_axpy(w, 1.0, m.kappa());

    JacVec buf(static_cast<size_t>(g));
    auto F = [&](const JacVec& a) {
        for (size_t i = 0; i < buf.size(); ++i) buf[i] = w[i] - a[i];
        return th.norm_log(buf);
    };
    double qerr = 0.0;
    double I = m.mu_average(F, {P}, &qerr);

    double log_s = -static_cast<double>(g) * g * I;
    if (m.weierstrass_weight() > 0) {
        double s = 0.0;
        for (int k = 0; k < m.weierstrass_count(); ++k)
            s += th.norm_log(detail::vec_sum(1.0, w, -1.0, m.weierstrass_image(k)));
        log_s += m.weierstrass_weight() / g * s;
    }
    return {log_s, static_cast<double>(g) * g * qerr};
}

} // namespace arakelov
