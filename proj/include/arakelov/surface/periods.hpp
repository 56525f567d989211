#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/linalg.hpp"
#include "arakelov/surface/homology.hpp"
#include "arakelov/theta/characteristics.hpp"
#include "arakelov/theta/siegel.hpp"

namespace arakelov {

using JacVec = std::vector<cdouble>;

// Everything derived from one period computation. tau is certified symmetric
// with positive definite imaginary part on construction; the remaining checks
// (half-period table) need the Abel map and live in abel_jacobi.hpp.
struct PeriodData {
    Curve curve;
    Homology homology;
    SiegelPoint tau;
    CMat a_inv;          // omega_A^{-1}: maps the x^{k-1} dx/y frame to the normalised one
    CMat gram;           // inner product matrix of the x^{k-1} dx/y frame
    CMat gram_inv;
    CMat ortho;          // rows give the orthonormal frame in terms of omega_k
    double log_det_gram; // log det of gram
    JacVec kappa;        // vector of Riemann constants, base point infinity
    std::vector<int> ordering; // permutation applied to the (Re,Im)-sorted roots
};

// derivation of all period quantities from the raw period matrices; also the
// entry point for data loaded from a file, so every certificate lives here
inline PeriodData periods_from_matrices(Curve curve, Homology hom,
                                        std::vector<int> ordering = {}) {
    int g = curve.genus;

    LUFactors alu = lu_factor(hom.omega_A);
    CMat tau(g, g);
    for (int j = 0; j < g; ++j) {
        std::vector<cdouble> col(static_cast<size_t>(g));
        for (int k = 0; k < g; ++k) col[static_cast<size_t>(k)] = hom.omega_B.at(k, j);
        auto x = lu_solve(alu, col);
        for (int k = 0; k < g; ++k) tau.at(k, j) = x[static_cast<size_t>(k)];
    }

    // certificate: symmetry within the quadrature budget, then exact symmetrisation
    double scale = 0.0;
    for (const auto& v : tau.a) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j)
            if (std::abs(tau.at(i, j) - tau.at(j, i)) > 1e-6 * std::max(scale, 1.0))
                throw basis_inconsistency_error(
                    "periods: tau failed the symmetry certificate");
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            cdouble m = 0.5 * (tau.at(i, j) + tau.at(j, i));
            tau.at(i, j) = tau.at(j, i) = m;
        }

    SiegelPoint sp(std::move(tau), 1e-7); // throws unless Im tau is positive definite

    CMat Yc(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) Yc.at(i, j) = sp.Y[static_cast<size_t>(i) * g + j];

    CMat gram = mat_mul(mat_mul(hom.omega_A, Yc), mat_adjoint(hom.omega_A));
    auto gi = hermitian_inverse_det(gram);

    CMat L = cholesky(Yc);
    CMat ortho = mat_inverse(mat_mul(hom.omega_A, L));

    PeriodData pd{std::move(curve),
                  std::move(hom),
                  std::move(sp),
                  CMat(g, g),
                  std::move(gram),
                  std::move(gi.inverse),
                  std::move(ortho),
                  std::log(gi.det),
                  {},
                  std::move(ordering)};
    pd.a_inv = mat_inverse(pd.homology.omega_A);
    pd.kappa = riemann_kappa_char(pd.curve.genus).point(pd.tau);
    return pd;
}

inline PeriodData build_periods_raw(Curve curve, const QuadratureConfig& cfg,
                                    std::vector<int> ordering = {}) {
    QuadratureConfig tight = cfg;
    tight.quad_rel_tol = std::min(cfg.quad_rel_tol, 1e-10);
    Homology hom = homology_basis(curve, tight);
    return periods_from_matrices(std::move(curve), std::move(hom), std::move(ordering));
}

// distance of z to the lattice Z^g + tau Z^g, max norm of the residual
inline double lattice_distance(const SiegelPoint& sp, const JacVec& z) {
    int g = sp.g;
    std::vector<double> y(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i) y[static_cast<size_t>(i)] = z[static_cast<size_t>(i)].imag();
    std::vector<double> n(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i) {
        double c = 0.0;
        for (int j = 0; j < g; ++j)
            c += sp.Yinv[static_cast<size_t>(i) * g + j] * y[static_cast<size_t>(j)];
        n[static_cast<size_t>(i)] = std::floor(c + 0.5);
    }
    double dist = 0.0;
    for (int i = 0; i < g; ++i) {
        cdouble r = z[static_cast<size_t>(i)];
        for (int j = 0; j < g; ++j) r -= sp.tau.at(i, j) * n[static_cast<size_t>(j)];
        r -= std::floor(r.real() + 0.5);
        dist = std::max(dist, std::abs(r));
    }
    return dist;
}

} // namespace arakelov
