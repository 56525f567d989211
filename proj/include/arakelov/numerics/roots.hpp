#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/poly.hpp"

namespace arakelov {

// Simultaneous root finding (Aberth-Ehrlich) with a Newton polish.
// Roots come back sorted by (Re, Im) so downstream orderings are reproducible.
inline std::vector<cdouble> poly_roots(const Poly& p_in, double tol = 1e-13,
                                       int max_iter = 500) {
    int deg = p_in.degree();
    if (deg < 1) throw invalid_input("poly_roots: degree must be at least 1");

    std::vector<cdouble> coeffs(p_in.c.begin(), p_in.c.begin() + deg + 1);

    // exact zeros at the origin peel off without iteration
    std::vector<cdouble> roots;
    size_t shift = 0;
    while (shift < coeffs.size() - 1 && coeffs[shift] == 0.0) {
        roots.push_back(0.0);
        ++shift;
    }
    coeffs.erase(coeffs.begin(), coeffs.begin() + shift);

    int n = static_cast<int>(coeffs.size()) - 1;
    if (n > 0) {
        cdouble lead = coeffs.back();
        for (auto& a : coeffs) a /= lead;
        Poly p(coeffs);

        double radius = 0.0;
        for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(coeffs[k]));
        radius = 1.0 + radius; // Cauchy bound for the monic polynomial

        std::vector<cdouble> z(n);
        const double two_pi = 6.283185307179586476925286766559;
        for (int k = 0; k < n; ++k) {
            double ang = two_pi * (k + 0.25) / n + 0.43; // offset breaks symmetry locks
            z[k] = radius * cdouble(std::cos(ang), std::sin(ang));
        }

        bool converged = false;
        for (int it = 0; it < max_iter && !converged; ++it) {
            converged = true;
            for (int k = 0; k < n; ++k) {
                auto [pv, dpv] = p.eval_d(z[k]);
                if (pv == 0.0) continue;
                if (dpv == 0.0) {
                    z[k] += 1e-8 * (1.0 + std::abs(z[k])) * cdouble(0.9553, 0.2955);
                    converged = false;
                    continue;
                }
                cdouble w = pv / dpv;
                cdouble s = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != k) s += 1.0 / (z[k] - z[j]);
                cdouble denom = 1.0 - w * s;
                cdouble delta = (denom == 0.0) ? w : w / denom;
                z[k] -= delta;
                if (std::abs(delta) > tol * (1.0 + std::abs(z[k]))) converged = false;
            }
        }
        if (!converged)
            throw convergence_error("poly_roots: Aberth iteration did not converge");

        for (int k = 0; k < n; ++k) {
            for (int it = 0; it < 3; ++it) {
                auto [pv, dpv] = p.eval_d(z[k]);
                if (dpv == 0.0) break;
                z[k] -= pv / dpv;
            }
        }
        roots.insert(roots.end(), z.begin(), z.end());
    }

    std::sort(roots.begin(), roots.end(), [](cdouble a, cdouble b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

inline double min_pairwise_distance(const std::vector<cdouble>& pts) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d = std::min(d, std::abs(pts[i] - pts[j]));
    return d;
}

} // namespace arakelov
