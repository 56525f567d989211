#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/linalg.hpp"
#include "arakelov/surface/contour.hpp"
#include "arakelov/surface/curve.hpp"
#include "arakelov/surface/sheet.hpp"

namespace arakelov {

// Chain basis bookkeeping. Loop j is a cycle around the branch pair
// (b_j, b_{j+1}); its integral is evaluated as twice the collapsed segment
// integral, while the intersection pairing is computed combinatorially on a
// thickened rectangle ("stadium") around the same segment with sheet labels
// transported across the cut rays.
struct Homology {
    std::vector<int> chain_sign;            // normalisation applied to loop j
    std::vector<std::vector<cdouble>> loop; // raw loop integrals of the omega basis
    CMat omega_A, omega_B;                  // columns = cycles, rows = differentials
};

namespace detail {

struct Stadium {
    std::array<cdouble, 4> v; // corners, traversed v0->v1->v2->v3->v0
    // per edge: cut crossings and the label parity accumulated at each vertex
    std::array<std::vector<CutCrossing>, 4> cross;
    std::array<int, 4> vertex_parity; // label parity at vertex i
    double anchor_t = 0.0;            // anchor parameter on edge 0
    int anchor_parity = 0;            // label parity at the anchor itself
};

inline double cross2(cdouble a, cdouble b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

inline double point_segment_distance(cdouble z, cdouble p, cdouble q) {
    cdouble d = q - p;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - p);
    double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

inline double segment_segment_distance(cdouble p1, cdouble q1, cdouble p2, cdouble q2) {
    // small and simple: if they cross the distance is zero, else it is attained
    // at an endpoint
    cdouble d1 = q1 - p1, d2 = q2 - p2;
    double den = cross2(d1, d2);
    if (std::abs(den) > 1e-15) {
        double t = cross2(p2 - p1, d2) / den;
        double s = cross2(p2 - p1, d1) / den;
        if (t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0) return 0.0;
    }
    double d = point_segment_distance(p1, p2, q2);
    d = std::min(d, point_segment_distance(q1, p2, q2));
    d = std::min(d, point_segment_distance(p2, p1, q1));
    d = std::min(d, point_segment_distance(q2, p1, q1));
    return d;
}

// label parity of stadium st at parameter t of edge e; parity 0 means the
// strand lies over sigma = +1 as continued from the segment midpoint
inline int stadium_parity(const Stadium& st, int e, double t) {
    if (e == 0) {
        int n = st.anchor_parity;
        double lo = std::min(st.anchor_t, t), hi = std::max(st.anchor_t, t);
        for (const auto& c : st.cross[0])
            if (c.t > lo && c.t <= hi) ++n;
        return n % 2;
    }
    int n = st.vertex_parity[static_cast<size_t>(e)];
    for (const auto& c : st.cross[static_cast<size_t>(e)])
        if (c.t <= t) ++n;
    return n % 2;
}

struct CrossingCheckFailure {}; // internal retry signal for degenerate layouts

inline Stadium make_stadium(const Curve& curve, const ReferenceSheet& sheet, int j,
                            double width) {
    cdouble p = curve.branch[static_cast<size_t>(j)];
    cdouble q = curve.branch[static_cast<size_t>(j) + 1];
    cdouble u = (q - p) / std::abs(q - p);
    cdouble n = u * cdouble(0.0, 1.0);
    double del = 0.5 * width;

    Stadium st;
    st.v = {p - del * u + width * n, q + del * u + width * n, q + del * u - width * n,
            p - del * u - width * n};
    for (int e = 0; e < 4; ++e)
        st.cross[static_cast<size_t>(e)] =
            cut_crossings(st.v[static_cast<size_t>(e)], st.v[static_cast<size_t>((e + 1) % 4)], sheet);

    // anchor: the point of edge 0 straight above the segment midpoint, labeled
    // by continuing sigma = +1 from the midpoint itself
    cdouble mid = 0.5 * (p + q);
    cdouble apex = mid + width * n;
    st.anchor_parity = static_cast<int>(cut_crossings(mid, apex, sheet).size()) % 2;
    double e0len = std::abs(st.v[1] - st.v[0]);
    st.anchor_t = (del + 0.5 * std::abs(q - p)) / e0len;

    // walk the polyline from the anchor, accumulating label parity
    int acc = st.anchor_parity;
    for (const auto& c : st.cross[0])
        if (c.t > st.anchor_t) ++acc;
    st.vertex_parity[1] = acc % 2;
    for (int e = 1; e < 4; ++e) {
        acc += static_cast<int>(st.cross[static_cast<size_t>(e)].size());
        st.vertex_parity[static_cast<size_t>((e + 1) % 4)] = acc % 2;
    }
    for (const auto& c : st.cross[0])
        if (c.t <= st.anchor_t) ++acc;
    // a closed polyline must cross cut rays an even number of times in total,
    // otherwise the sheet labels cannot be consistent
    if ((acc - st.anchor_parity) % 2 != 0)
        throw basis_inconsistency_error("homology: sheet labels do not close up");
    return st;
}

// signed same-sheet crossing count between two stadium polylines
inline int stadium_intersection(const Stadium& a, const Stadium& b) {
    int total = 0;
    for (int ea = 0; ea < 4; ++ea) {
        cdouble pa = a.v[static_cast<size_t>(ea)], qa = a.v[static_cast<size_t>((ea + 1) % 4)];
        cdouble da = qa - pa;
        for (int eb = 0; eb < 4; ++eb) {
            cdouble pb = b.v[static_cast<size_t>(eb)], qb = b.v[static_cast<size_t>((eb + 1) % 4)];
            cdouble db = qb - pb;
            double den = cross2(da, db);
            double scale = std::abs(da) * std::abs(db);
            if (std::abs(den) < 1e-12 * scale) {
                // parallel edges: fine if they stay apart, degenerate otherwise
                if (segment_segment_distance(pa, qa, pb, qb) < 1e-9 * std::abs(da))
                    throw CrossingCheckFailure{};
                continue;
            }
            double t = cross2(pb - pa, db) / den;
            double s = cross2(pb - pa, da) / den;
            if (t <= -1e-9 || t >= 1.0 + 1e-9 || s <= -1e-9 || s >= 1.0 + 1e-9) continue;
            if (t < 1e-9 || t > 1.0 - 1e-9 || s < 1e-9 || s > 1.0 - 1e-9)
                throw CrossingCheckFailure{}; // touching at corners: re-jig widths
            int la = stadium_parity(a, ea, t);
            int lb = stadium_parity(b, eb, s);
            if (la == lb) total += (den > 0.0) ? 1 : -1;
        }
    }
    return total;
}

} // namespace detail

// Builds the symplectic basis data for the current branch ordering. Throws
// basis_inconsistency_error when the ordering does not produce the expected
// chain pattern (caller may retry with another ordering).
inline Homology homology_basis(const Curve& curve, const QuadratureConfig& cfg) {
    int g = curve.genus;
    int n_loops = 2 * g;
    if (static_cast<int>(curve.branch.size()) < n_loops + 1)
        throw invalid_input("homology_basis: not enough branch points");
    ReferenceSheet sheet = ReferenceSheet::x_chart(curve);

    // the simple-arc requirement: non adjacent chain segments must not cross
    for (int i = 0; i + 2 <= n_loops; ++i)
        for (int j = i + 2; j < n_loops; ++j) {
            double d = detail::segment_segment_distance(
                curve.branch[static_cast<size_t>(i)], curve.branch[static_cast<size_t>(i) + 1],
                curve.branch[static_cast<size_t>(j)], curve.branch[static_cast<size_t>(j) + 1]);
            if (d <= 0.0)
                throw basis_inconsistency_error(
                    "homology: branch ordering gives a self-crossing chain");
        }

    // base widths keeping each stadium clear of everything it must not touch
    std::vector<double> base_width(static_cast<size_t>(n_loops));
    for (int j = 0; j < n_loops; ++j) {
        cdouble p = curve.branch[static_cast<size_t>(j)], q = curve.branch[static_cast<size_t>(j) + 1];
        double lim = 0.18 * std::abs(q - p);
        for (int m = 0; m < static_cast<int>(curve.branch.size()); ++m) {
            if (m == j || m == j + 1) continue;
            lim = std::min(lim, 0.22 * detail::point_segment_distance(
                                     curve.branch[static_cast<size_t>(m)], p, q));
        }
        for (int i = 0; i < n_loops; ++i) {
            if (std::abs(i - j) <= 1) continue;
            lim = std::min(lim, 0.3 * detail::segment_segment_distance(
                                    p, q, curve.branch[static_cast<size_t>(i)],
                                    curve.branch[static_cast<size_t>(i) + 1]));
        }
        if (!(lim > 0.0))
            throw basis_inconsistency_error("homology: stadium widths collapse");
        base_width[static_cast<size_t>(j)] = lim;
    }

    // intersection matrix, retrying with shrunken widths on degenerate contact
    CMat J(n_loops, n_loops);
    bool got = false;
    for (int attempt = 0; attempt < 8 && !got; ++attempt) {
        double shrink = std::pow(0.83, attempt);
        try {
            std::vector<detail::Stadium> st;
            for (int j = 0; j < n_loops; ++j)
                st.push_back(detail::make_stadium(
                    curve, sheet, j,
                    base_width[static_cast<size_t>(j)] * shrink * (1.0 + 0.07 * j)));
            for (int i = 0; i < n_loops; ++i)
                for (int j = 0; j < n_loops; ++j) J.at(i, j) = 0.0;
            for (int i = 0; i < n_loops; ++i)
                for (int j = i + 1; j < n_loops; ++j) {
                    int v = detail::stadium_intersection(st[static_cast<size_t>(i)],
                                                         st[static_cast<size_t>(j)]);
                    J.at(i, j) = static_cast<double>(v);
                    J.at(j, i) = static_cast<double>(-v);
                }
            got = true;
        } catch (const detail::CrossingCheckFailure&) {
            continue;
        } catch (const path_refinement_error&) {
            continue; // stadium edge ran through a branch point: shrink and retry
        }
    }
    if (!got)
        throw basis_inconsistency_error(
            "homology: could not realise clean stadium intersections");

    for (int i = 0; i < n_loops; ++i)
        for (int j = i + 1; j < n_loops; ++j) {
            double want = (j == i + 1) ? 1.0 : 0.0;
            if (std::abs(std::abs(J.at(i, j).real()) - want) > 0.5)
                throw basis_inconsistency_error(
                    "homology: chain intersections are not consecutive-pair type");
        }

    Homology h;
    h.chain_sign.assign(static_cast<size_t>(n_loops), 1);
    for (int j = 0; j + 1 < n_loops; ++j)
        h.chain_sign[static_cast<size_t>(j) + 1] =
            h.chain_sign[static_cast<size_t>(j)] *
            (J.at(j, j + 1).real() > 0.0 ? 1 : -1);

    // loop integrals of the omega basis x^{k-1} dx / y
    Numerators num = [g](cdouble x, cdouble* out) {
        cdouble v = 1.0;
        for (int k = 0; k < g; ++k) {
            out[k] = v;
            v *= x;
        }
    };
    h.loop.resize(static_cast<size_t>(n_loops));
    for (int j = 0; j < n_loops; ++j) {
        auto seg = segment_integral_sqrt_both(sheet, num, g, j, j + 1, +1, cfg);
        h.loop[static_cast<size_t>(j)] = seg.integral;
        for (auto& v : h.loop[static_cast<size_t>(j)])
            v *= 2.0 * h.chain_sign[static_cast<size_t>(j)];
    }

    // A_i = c_{2i}, B_i = sum_{j >= i} c_{2j+1} (0-based chain indices)
    h.omega_A = CMat(g, g);
    h.omega_B = CMat(g, g);
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k) {
            h.omega_A.at(k, i) = h.loop[static_cast<size_t>(2 * i)][static_cast<size_t>(k)];
            cdouble s = 0.0;
            for (int j = i; j < g; ++j)
                s += h.loop[static_cast<size_t>(2 * j + 1)][static_cast<size_t>(k)];
            h.omega_B.at(k, i) = s;
        }
    return h;
}

} // namespace arakelov
