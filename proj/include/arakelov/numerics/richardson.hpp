#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov {

// Limit of F(h) as h -> 0 assuming an expansion L + c1 h + c2 h^2 + ...
// Halving steps with a Neville table; returns when two diagonal entries agree
// to rel_tol. When the samples carry a noise floor the diagonals stall before
// that: if floor_tol > 0 the best diagonal pair seen is accepted instead, with
// its gap reported through err_out, and only a gap above floor_tol throws.
inline double richardson_limit(const std::function<double(double)>& F, double h0,
                               double rel_tol = 1e-9, int max_steps = 12,
                               double* err_out = nullptr, double floor_tol = 0.0) {
    std::vector<std::vector<double>> T;
    double h = h0;
    double prev = 0.0;
    double best = 0.0, best_err = 1e300;
    for (int i = 0; i < max_steps; ++i) {
        T.emplace_back();
        T.back().resize(static_cast<size_t>(i) + 1);
        T[static_cast<size_t>(i)][0] = F(h);
        double pow2 = 1.0;
        for (int j = 1; j <= i; ++j) {
            pow2 *= 2.0;
            T[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                (pow2 * T[static_cast<size_t>(i)][static_cast<size_t>(j - 1)] -
                 T[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]) /
                (pow2 - 1.0);
        }
        double diag = T[static_cast<size_t>(i)][static_cast<size_t>(i)];
        if (i > 1) {
            double err = std::abs(diag - prev);
            if (err <= rel_tol * (1.0 + std::abs(diag))) {
                if (err_out) *err_out = err;
                return diag;
            }
            if (err < best_err) {
                best_err = err;
                best = diag;
            }
        }
        prev = diag;
        h *= 0.5;
    }
    if (floor_tol > 0.0 && best_err <= floor_tol * (1.0 + std::abs(best))) {
        if (err_out) *err_out = best_err;
        return best;
    }
    throw convergence_error("richardson_limit: no convergence in allotted steps");
}

} // namespace arakelov
