#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/poly.hpp"
#include "arakelov/numerics/roots.hpp"

namespace arakelov {

// A point of the double cover y^2 = f(x). The sheet is relative to the
// reference branch of y (see sheet.hpp); at infinity (odd degree models only)
// the sheet is meaningless and ignored.
struct SurfacePoint {
    bool at_infinity = false;
    cdouble x = 0.0;
    int sheet = +1;

    static SurfacePoint infinity() { return {true, 0.0, +1}; }
    static SurfacePoint finite(cdouble x, int sheet) { return {false, x, sheet}; }
};

// Hyperelliptic model y^2 = f(x) with distinct roots. Branch points are kept
// in a deterministic order: sorted by (Re, Im), optionally re-shuffled by a
// caller-supplied permutation, because the half-period bookkeeping downstream
// is tied to this exact sequence.
struct Curve {
    Poly f;
    int degree = 0;
    int genus = 0;
    cdouble lc = 1.0;
    std::vector<cdouble> branch; // finite branch points, ordered
    bool infinity_is_branch = false;

    double cut_angle = 0.0; // direction of the square root cuts is pi + cut_angle
    double min_gap = 0.0;   // min distance between finite branch points
    double scale = 0.0;     // max |branch point|
    std::vector<double> clearance; // per branch point safety radius

    // t = 1/x chart: s^2 = G(t), roots of G and its leading coefficient
    Poly G;
    std::vector<cdouble> t_roots;
    cdouble lc_G = 1.0;

    double r_disk = 0.0;     // |x| <= r_disk is the x chart disk for area integrals
    double r_junction = 0.0; // chart hand-over radius for paths from infinity
};

namespace detail {

// every cut ray must stay well away from the other branch points, otherwise
// sheet continuation along segments between them turns into coin flips
inline bool cut_angle_ok(double alpha, const std::vector<cdouble>& pts) {
    cdouble rot = std::exp(cdouble(0.0, -(3.14159265358979323846264338328 + alpha)));
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            cdouble d = (pts[i] - pts[j]) * rot;
            if (std::abs(d.imag()) < 1e-6 * std::abs(d)) return false;
        }
    return true;
}

} // namespace detail

inline Curve build_curve(const Poly& f, const std::vector<int>& ordering = {}) {
    Curve c;
    c.f = f;
    c.degree = f.degree();
    if (c.degree < 3) throw invalid_input("build_curve: degree must be at least 3");
    c.genus = (c.degree - 1) / 2;
    c.lc = f.leading();
    c.infinity_is_branch = (c.degree % 2 == 1);

    c.branch = poly_roots(f);
    c.scale = 0.0;
    for (cdouble b : c.branch) c.scale = std::max(c.scale, std::abs(b));
    double sep = min_pairwise_distance(c.branch);
    if (!(sep > 1e-6 * std::max(c.scale, 1.0)))
        throw singular_curve_error("build_curve: repeated or nearly repeated roots");
    c.min_gap = sep;

    if (!ordering.empty()) {
        if (ordering.size() != c.branch.size())
            throw invalid_input("build_curve: ordering permutation has wrong length");
        std::vector<int> seen(ordering.size(), 0);
        std::vector<cdouble> reordered(c.branch.size());
        for (size_t i = 0; i < ordering.size(); ++i) {
            int k = ordering[i];
            if (k < 0 || k >= static_cast<int>(c.branch.size()) || seen[static_cast<size_t>(k)]++)
                throw invalid_input("build_curve: ordering is not a permutation");
            reordered[i] = c.branch[static_cast<size_t>(k)];
        }
        c.branch = std::move(reordered);
    }

    // t chart polynomial G(t) = t^(2g+2) f(1/t)
    int full = 2 * c.genus + 2;
    std::vector<cdouble> gc(static_cast<size_t>(full) + 1, 0.0);
    for (int k = 0; k <= c.degree; ++k)
        gc[static_cast<size_t>(full - k)] = f.c[static_cast<size_t>(k)];
    c.G = Poly(std::move(gc));
    c.t_roots.clear();
    bool zero_is_root = false;
    for (cdouble b : c.branch) {
        if (b == 0.0)
            zero_is_root = true;
        else
            c.t_roots.push_back(1.0 / b);
    }
    if (c.infinity_is_branch) c.t_roots.push_back(0.0);
    int m0 = zero_is_root ? 1 : 0;
    c.lc_G = f.c[static_cast<size_t>(m0)];

    // one cut direction for both charts, clear of every pairwise alignment
    const double base_angle = 0.46364760900080611621; // atan(1/2)
    bool found = false;
    for (int m = 0; m < 97 && !found; ++m) {
        double alpha = base_angle + 0.0137 * m;
        if (detail::cut_angle_ok(alpha, c.branch) && detail::cut_angle_ok(alpha, c.t_roots)) {
            c.cut_angle = alpha;
            found = true;
        }
    }
    if (!found)
        throw genericity_error("build_curve: no usable cut direction found");

    c.clearance.resize(c.branch.size());
    for (size_t i = 0; i < c.branch.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < c.branch.size(); ++j)
            if (j != i) d = std::min(d, std::abs(c.branch[i] - c.branch[j]));
        c.clearance[i] = 0.35 * d;
    }

    c.r_disk = std::max(2.0, 1.5 * c.scale);
    c.r_junction = 2.0 * c.scale + 2.0;
    return c;
}

} // namespace arakelov
