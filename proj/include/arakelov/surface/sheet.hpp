#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/surface/curve.hpp"

namespace arakelov {

// Square root with the branch cut rotated to direction pi + alpha, so that
// real-axis configurations never sit on a cut. On the cut-free set this is
// analytic and rotated_sqrt(w)^2 == w.
inline cdouble rotated_sqrt(cdouble w, double alpha) {
    return std::exp(cdouble(0.0, 0.5 * alpha)) *
           std::sqrt(w * std::exp(cdouble(0.0, -alpha)));
}

// Reference branch of y over the x plane minus the cut rays:
//   y_ref(x) = rotated_sqrt(lc) * prod_j rotated_sqrt(x - b_j).
// Any lift of the curve is (x, sigma * y_ref(x)) with sigma = +-1; sigma flips
// exactly when x crosses a cut ray, which callers track combinatorially.
struct ReferenceSheet {
    std::vector<cdouble> pts; // cut ray sources
    cdouble lc;
    double alpha;

    ReferenceSheet(std::vector<cdouble> points, cdouble lead, double cut_angle)
        : pts(std::move(points)), lc(lead), alpha(cut_angle) {}

    static ReferenceSheet x_chart(const Curve& c) {
        return ReferenceSheet(c.branch, c.lc, c.cut_angle);
    }
    static ReferenceSheet t_chart(const Curve& c) {
        return ReferenceSheet(c.t_roots, c.lc_G, c.cut_angle);
    }

    cdouble eval(cdouble x) const {
        cdouble y = rotated_sqrt(lc, alpha);
        for (cdouble b : pts) y *= rotated_sqrt(x - b, alpha);
        return y;
    }

    // product with two factors left out (for endpoint-resolved rules)
    cdouble eval_skipping(cdouble x, int skip1, int skip2) const {
        cdouble y = rotated_sqrt(lc, alpha);
        for (int j = 0; j < static_cast<int>(pts.size()); ++j) {
            if (j == skip1 || j == skip2) continue;
            y *= rotated_sqrt(x - pts[static_cast<size_t>(j)], alpha);
        }
        return y;
    }
};

struct CutCrossing {
    double t;   // parameter in (0,1) along the segment
    int source; // index of the branch point whose ray is crossed
};

// All cut-ray crossings of the open segment p -> q, sorted by parameter.
// A segment running through a branch point itself is reported as an error;
// path construction is expected to avoid that.
inline std::vector<CutCrossing> cut_crossings(cdouble p, cdouble q,
                                              const ReferenceSheet& sheet) {
    const double pi = 3.14159265358979323846264338328;
    cdouble rot = std::exp(cdouble(0.0, -(pi + sheet.alpha)));
    std::vector<CutCrossing> out;
    cdouble d = (q - p) * rot;
    for (int j = 0; j < static_cast<int>(sheet.pts.size()); ++j) {
        cdouble u = (p - sheet.pts[static_cast<size_t>(j)]) * rot;
        if (d.imag() == 0.0) continue; // parallel: excluded by cut angle choice
        double t = -u.imag() / d.imag();
        if (t <= 0.0 || t >= 1.0) continue;
        double s = u.real() + t * d.real(); // distance along the ray
        double seg_len = std::abs(q - p);
        if (std::abs(s) < 1e-12 * seg_len)
            throw path_refinement_error("segment passes through a branch point");
        if (s > 0.0) out.push_back({t, j});
    }
    std::sort(out.begin(), out.end(),
              [](const CutCrossing& a, const CutCrossing& b) { return a.t < b.t; });
    return out;
}

// parity of cut crossings between two parameters on a segment whose crossing
// list is already known
inline int crossing_parity(const std::vector<CutCrossing>& xs, double t0, double t1) {
    if (t0 > t1) std::swap(t0, t1);
    int n = 0;
    for (const auto& c : xs)
        if (c.t > t0 && c.t <= t1) ++n;
    return n % 2;
}

} // namespace arakelov
