#pragma once

#include <cmath>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/invariants/green.hpp"
#include "arakelov/numerics/linalg.hpp"

namespace arakelov {

// Residual of the Faltings decomposition of delta: for g generic points P_k
// and a generic probe Q,
//
//   ||.||(P_1 + .. + P_g - Q) + delta/8 - log||det omega_k(P_l)||_Ar
//     + sum_{k<l} log G(P_k, P_l) - sum_k log G(P_k, Q)  =  0
//
// with the Arakelov norm of the frame determinant assembled from the chart
// determinant and the dz norms at the sample points.
template <class Model>
double faltings_residual(const Model& m, const std::vector<typename Model::Point>& pts,
                         const typename Model::Point& Q, double log_s, double delta) {
    int g = m.genus();
    if (static_cast<int>(pts.size()) != g)
        throw invalid_input("faltings residual: needs exactly g points");
    const ThetaEvaluator& th = m.theta();

    JacVec v = m.kappa();
    for (const auto& P : pts) detail::vec_axpy(v, 1.0, m.abel(P));
    detail::vec_axpy(v, -1.0, m.abel(Q));
    double nl = th.norm_log(v);
    if (nl < detail::genericity_floor)
        throw genericity_error("faltings residual: theta factor nearly vanishes");

    CMat M(g, g);
    for (int l = 0; l < g; ++l) {
        auto col = m.frame_values(pts[static_cast<size_t>(l)]);
        for (int k = 0; k < g; ++k) M.at(k, l) = col[static_cast<size_t>(k)];
    }
    double log_det_ar = mat_log_abs_det(M);
    for (const auto& P : pts) log_det_ar += log_dz_arakelov(m, P, log_s);

    double greens = 0.0;
    for (size_t k = 0; k < pts.size(); ++k) {
        for (size_t l = k + 1; l < pts.size(); ++l)
            greens += green_log(m, pts[k], pts[l], log_s);
        greens -= green_log(m, pts[k], Q, log_s);
    }
    return nl + delta / 8.0 - log_det_ar + greens;
}

// Residual of the Guardia identity, which trades the frame determinant for
// the Jacobian-of-theta norm:
//
//   (g-1) ||.||(P_1 + .. + P_g - Q) - delta/8 - log||J||
//     - (g-1) sum_k log G(P_k, Q) + sum_{k<l} log G(P_k, P_l)  =  0
template <class Model>
double guardia_residual(const Model& m, const std::vector<typename Model::Point>& pts,
                        const typename Model::Point& Q, double log_s, double delta) {
    int g = m.genus();
    if (static_cast<int>(pts.size()) != g)
        throw invalid_input("guardia residual: needs exactly g points");
    const ThetaEvaluator& th = m.theta();

    std::vector<JacVec> A(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) A[k] = m.abel(pts[k]);
    JacVec sumA(static_cast<size_t>(g), 0.0);
    for (const JacVec& a : A) detail::vec_axpy(sumA, 1.0, a);

    JacVec v = detail::vec_sum(1.0, sumA, -1.0, m.abel(Q));
    detail::vec_axpy(v, 1.0, m.kappa());
    double nl = th.norm_log(v);
    if (nl < detail::genericity_floor)
        throw genericity_error("guardia residual: theta factor nearly vanishes");

    std::vector<JacVec> rows(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        rows[k] = detail::vec_sum(1.0, sumA, -1.0, A[k]);
        detail::vec_axpy(rows[k], 1.0, m.kappa());
    }
    double jn = th.j_norm_log(rows);
    if (jn < detail::genericity_floor)
        throw genericity_error("guardia residual: Jacobian norm nearly vanishes");

    double greens = 0.0;
    for (size_t k = 0; k < pts.size(); ++k) {
        for (size_t l = k + 1; l < pts.size(); ++l)
            greens += green_log(m, pts[k], pts[l], log_s);
        greens -= (g - 1.0) * green_log(m, pts[k], Q, log_s);
    }
    return (g - 1.0) * nl - delta / 8.0 - jn + greens;
}

} // namespace arakelov
