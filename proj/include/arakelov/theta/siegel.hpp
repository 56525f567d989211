#pragma once

#include <cmath>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/linalg.hpp"

namespace arakelov {

// A point of Siegel space: symmetric g x g tau with positive definite
// imaginary part. Real-matrix caches back the theta machinery.
struct SiegelPoint {
    CMat tau;
    int g = 0;
    std::vector<double> Y;    // Im tau, row-major
    std::vector<double> Yinv;
    double det_Y = 0.0;
    double lambda_min = 0.0;  // smallest eigenvalue of Y
    double log_det_Y = 0.0;

    explicit SiegelPoint(CMat t, double sym_tol = 1e-9) : tau(std::move(t)) {
        if (tau.rows != tau.cols || tau.rows < 1)
            throw invalid_input("SiegelPoint: square matrix required");
        g = tau.rows;
        double scale = 0.0;
        for (const auto& v : tau.a) scale = std::max(scale, std::abs(v));
        for (int i = 0; i < g; ++i)
            for (int j = i + 1; j < g; ++j)
                if (std::abs(tau.at(i, j) - tau.at(j, i)) > sym_tol * std::max(scale, 1.0))
                    throw invalid_input("SiegelPoint: matrix is not symmetric");

        Y.resize(static_cast<size_t>(g) * g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                Y[static_cast<size_t>(i) * g + j] =
                    0.5 * (tau.at(i, j).imag() + tau.at(j, i).imag());

        auto eig = sym_eigenvalues(Y, g);
        lambda_min = eig.front();
        if (!(lambda_min > 0.0))
            throw numeric_degeneracy("SiegelPoint: Im tau is not positive definite",
                                     lambda_min);
        det_Y = 1.0;
        log_det_Y = 0.0;
        for (double e : eig) {
            det_Y *= e;
            log_det_Y += std::log(e);
        }

        CMat Yc(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) Yc.at(i, j) = Y[static_cast<size_t>(i) * g + j];
        CMat Yic = mat_inverse(Yc);
        Yinv.resize(static_cast<size_t>(g) * g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                Yinv[static_cast<size_t>(i) * g + j] = Yic.at(i, j).real();
    }

    // y^T Yinv y for a real vector
    double quad_yinv(const std::vector<double>& y) const {
        double s = 0.0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                s += y[static_cast<size_t>(i)] * Yinv[static_cast<size_t>(i) * g + j] *
                     y[static_cast<size_t>(j)];
        return s;
    }
};

} // namespace arakelov
