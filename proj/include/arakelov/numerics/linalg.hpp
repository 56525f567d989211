#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/poly.hpp"

namespace arakelov {

// Small dense complex matrix, row-major. Sizes here stay genus-sized, so no
// effort is spent on blocking; partial pivoting is enough.
struct CMat {
    int rows = 0, cols = 0;
    std::vector<cdouble> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    cdouble& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    cdouble at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline CMat mat_mul(const CMat& A, const CMat& B) {
    if (A.cols != B.rows) throw invalid_input("mat_mul: shape mismatch");
    CMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            cdouble aik = A.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

inline CMat mat_adjoint(const CMat& A) {
    CMat C(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(j, i) = std::conj(A.at(i, j));
    return C;
}

inline CMat mat_transpose(const CMat& A) {
    CMat C(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
    return C;
}

struct LUFactors {
    CMat lu;              // combined L (unit diagonal) and U
    std::vector<int> piv; // row permutation
    int sign = 1;
};

inline LUFactors lu_factor(CMat A) {
    if (A.rows != A.cols) throw invalid_input("lu_factor: square matrix required");
    int n = A.rows;
    LUFactors f{std::move(A), std::vector<int>(static_cast<size_t>(n)), 1};
    for (int i = 0; i < n; ++i) f.piv[static_cast<size_t>(i)] = i;

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(f.lu.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu.at(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0)
            throw numeric_degeneracy("lu_factor: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu.at(p, j), f.lu.at(k, j));
            std::swap(f.piv[static_cast<size_t>(p)], f.piv[static_cast<size_t>(k)]);
            f.sign = -f.sign;
        }
        for (int i = k + 1; i < n; ++i) {
            cdouble m = f.lu.at(i, k) / f.lu.at(k, k);
            f.lu.at(i, k) = m;
            for (int j = k + 1; j < n; ++j) f.lu.at(i, j) -= m * f.lu.at(k, j);
        }
    }
    return f;
}

inline std::vector<cdouble> lu_solve(const LUFactors& f, const std::vector<cdouble>& b) {
    int n = f.lu.rows;
    std::vector<cdouble> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.piv[static_cast<size_t>(i)])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu.at(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu.at(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu.at(i, i);
    }
    return x;
}

inline cdouble lu_det(const LUFactors& f) {
    cdouble d = static_cast<double>(f.sign);
    for (int i = 0; i < f.lu.rows; ++i) d *= f.lu.at(i, i);
    return d;
}

inline cdouble mat_det(const CMat& A) { return lu_det(lu_factor(A)); }

inline CMat mat_inverse(const CMat& A) {
    LUFactors f = lu_factor(A);
    int n = A.rows;
    CMat inv(n, n);
    std::vector<cdouble> e(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        auto col = lu_solve(f, e);
        e[static_cast<size_t>(j)] = 0.0;
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[static_cast<size_t>(i)];
    }
    return inv;
}

// log|det A| computed factor by factor; safe when det would over/underflow.
inline double mat_log_abs_det(const CMat& A) {
    LUFactors f = lu_factor(A);
    double s = 0.0;
    for (int i = 0; i < f.lu.rows; ++i) s += std::log(std::abs(f.lu.at(i, i)));
    return s;
}

// Cholesky factor L (lower, positive real diagonal) of a Hermitian positive
// definite matrix. Hermitian symmetry is enforced up to rounding first.
inline CMat cholesky(const CMat& H, double sym_tol = 1e-9) {
    if (H.rows != H.cols) throw invalid_input("cholesky: square matrix required");
    int n = H.rows;
    double scale = 0.0;
    for (const auto& v : H.a) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (std::abs(H.at(i, j) - std::conj(H.at(j, i))) > sym_tol * std::max(scale, 1.0))
                throw numeric_degeneracy("cholesky: matrix is not Hermitian");

    CMat L(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cdouble s = 0.5 * (H.at(i, j) + std::conj(H.at(j, i)));
            for (int k = 0; k < j; ++k) s -= L.at(i, k) * std::conj(L.at(j, k));
            if (i == j) {
                double d = s.real();
                if (!(d > 0.0) || std::abs(s.imag()) > sym_tol * std::max(scale, 1.0))
                    throw numeric_degeneracy("cholesky: matrix is not positive definite", d);
                L.at(i, i) = std::sqrt(d);
            } else {
                L.at(i, j) = s / L.at(j, j).real();
            }
        }
    }
    return L;
}

// inverse of a lower-triangular matrix
inline CMat lower_tri_inverse(const CMat& L) {
    int n = L.rows;
    CMat inv(n, n);
    for (int j = 0; j < n; ++j) {
        inv.at(j, j) = 1.0 / L.at(j, j);
        for (int i = j + 1; i < n; ++i) {
            cdouble s = 0.0;
            for (int k = j; k < i; ++k) s += L.at(i, k) * inv.at(k, j);
            inv.at(i, j) = -s / L.at(i, i);
        }
    }
    return inv;
}

struct HermitianInverse {
    CMat inverse;
    double det;      // real and positive for a positive definite input
    double cond_est; // product of max-row-sum norms of H and H^{-1}
};

inline double norm_inf(const CMat& A) {
    double best = 0.0;
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += std::abs(A.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

inline HermitianInverse hermitian_inverse_det(const CMat& H, double cond_limit = 1e12) {
    CMat L = cholesky(H);
    CMat Linv = lower_tri_inverse(L);
    CMat inv = mat_mul(mat_adjoint(Linv), Linv);
    double det = 1.0;
    for (int i = 0; i < L.rows; ++i) {
        double d = L.at(i, i).real();
        det *= d * d;
    }
    double cond = norm_inf(H) * norm_inf(inv);
    if (!(cond < cond_limit))
        throw numeric_degeneracy("hermitian_inverse_det: condition estimate too large", cond);
    return {std::move(inv), det, cond};
}

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
// Matrices here are tiny, so simplicity beats speed.
inline std::vector<double> sym_eigenvalues(std::vector<double> s, int n) {
    auto at = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (apq == 0.0) continue;
                double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - sn * akq;
                    at(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - sn * aqk;
                    at(q, k) = sn * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace arakelov
