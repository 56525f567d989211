#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/surface/periods.hpp"
#include "arakelov/surface/sheet.hpp"

namespace arakelov {

// Truncated Taylor expansions around a fixed point: c[m] is the coefficient
// of h^m, i.e. the m-th derivative divided by m!. Lengths stay at the genus,
// so everything is dense and naive.
struct Jet {
    std::vector<cdouble> c;

    explicit Jet(int len) : c(static_cast<size_t>(len), 0.0) {}
    int len() const { return static_cast<int>(c.size()); }
};

inline Jet jet_of_poly(const Poly& p, cdouble x0, int len) {
    // repeated synthetic division: after pass m the last remainder is the
    // coefficient of h^m in p(x0 + h)
    std::vector<cdouble> work(p.c.begin(), p.c.end());
    if (work.empty()) work.push_back(0.0);
    Jet out(len);
    int n = static_cast<int>(work.size());
    for (int m = 0; m < len && m < n; ++m) {
        for (int k = n - 2; k >= m; --k)
            work[static_cast<size_t>(k)] += x0 * work[static_cast<size_t>(k) + 1];
        out.c[static_cast<size_t>(m)] = work[static_cast<size_t>(m)];
    }
    return out;
}

inline Jet jet_mul(const Jet& a, const Jet& b) {
    Jet out(a.len());
    for (int m = 0; m < a.len(); ++m) {
        cdouble s = 0.0;
        for (int i = 0; i <= m; ++i)
            s += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(m - i)];
        out.c[static_cast<size_t>(m)] = s;
    }
    return out;
}

// square root jet with the branch fixed by the caller-supplied value at h = 0
inline Jet jet_sqrt(const Jet& a, cdouble root0) {
    if (std::abs(root0 * root0 - a.c[0]) >
        1e-8 * std::max(std::abs(a.c[0]), 1e-300))
        throw invalid_input("jet_sqrt: supplied branch value does not square back");
    Jet out(a.len());
    out.c[0] = root0;
    for (int m = 1; m < a.len(); ++m) {
        cdouble s = a.c[static_cast<size_t>(m)];
        for (int i = 1; i < m; ++i)
            s -= out.c[static_cast<size_t>(i)] * out.c[static_cast<size_t>(m - i)];
        out.c[static_cast<size_t>(m)] = s / (2.0 * root0);
    }
    return out;
}

inline Jet jet_reciprocal(const Jet& b) {
    if (b.c[0] == 0.0) throw numeric_degeneracy("jet_reciprocal: zero constant term");
    Jet out(b.len());
    out.c[0] = 1.0 / b.c[0];
    for (int m = 1; m < b.len(); ++m) {
        cdouble s = 0.0;
        for (int i = 1; i <= m; ++i)
            s += b.c[static_cast<size_t>(i)] * out.c[static_cast<size_t>(m - i)];
        out.c[static_cast<size_t>(m)] = -s / b.c[0];
    }
    return out;
}

// Wronskian in the x chart of the orthonormal differential frame at P:
// det over k of the Taylor jets of phi_k(x) = (sum_j ortho_{kj} x^{j-1}) / y,
// rows indexed by the jet order. The normalisation 1/(l-1)! is already built
// into the jet coefficients, and the ortho rows carry the det(gram)^{-1/2}
// rescaling of the raw x^{k-1} dx / y frame.
inline cdouble wronskian_orthonormal(const PeriodData& pd, const SurfacePoint& P) {
    const Curve& c = pd.curve;
    int g = c.genus;
    if (P.at_infinity)
        throw singular_point_error("wronskian: the x chart does not cover infinity");
    double scale = std::max(c.scale, 1.0);
    for (cdouble b : c.branch)
        if (std::abs(P.x - b) < 1e-9 * scale)
            throw singular_point_error("wronskian: chart degenerates at a branch point");

    ReferenceSheet sh = ReferenceSheet::x_chart(c);
    cdouble y0 = static_cast<double>(P.sheet) * sh.eval(P.x);

    Jet invy = jet_reciprocal(jet_sqrt(jet_of_poly(c.f, P.x, g), y0));
    CMat M(g, g);
    for (int k = 0; k < g; ++k) {
        std::vector<cdouble> pc(static_cast<size_t>(g));
        for (int j = 0; j < g; ++j) pc[static_cast<size_t>(j)] = pd.ortho.at(k, j);
        Jet jk = jet_mul(jet_of_poly(Poly(std::move(pc)), P.x, g), invy);
        for (int l = 0; l < g; ++l) M.at(l, k) = jk.c[static_cast<size_t>(l)];
    }
    return mat_det(M);
}

// plain values of the orthonormal frame functions phi_k at P (no derivatives)
inline std::vector<cdouble> orthonormal_frame_values(const PeriodData& pd,
                                                     const SurfacePoint& P) {
    const Curve& c = pd.curve;
    int g = c.genus;
    if (P.at_infinity)
        throw singular_point_error("frame values: the x chart does not cover infinity");
    ReferenceSheet sh = ReferenceSheet::x_chart(c);
    cdouble y = static_cast<double>(P.sheet) * sh.eval(P.x);
    if (std::abs(y) < 1e-12 * std::max(c.scale, 1.0))
        throw singular_point_error("frame values: branch point");
    std::vector<cdouble> out(static_cast<size_t>(g));
    for (int k = 0; k < g; ++k) {
        cdouble s = 0.0, p = 1.0;
        for (int j = 0; j < g; ++j) {
            s += pd.ortho.at(k, j) * p;
            p *= P.x;
        }
        out[static_cast<size_t>(k)] = s / y;
    }
    return out;
}

} // namespace arakelov
