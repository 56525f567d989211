#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/gauss.hpp"
#include "arakelov/numerics/kahan.hpp"

namespace arakelov {

// Batched integrand over a parameter rectangle. The engine always asks for
// whole node sets at once (tensor panels in serpentine order, or polar ring
// grids near singular points); callers that chain expensive per-node state,
// like Abel-Jacobi transport, rely on every batch being spatially contiguous.
using BatchFn2D =
    std::function<void(const double* u, const double* v, int count, cdouble* out)>;

struct Quad2DRegion {
    double u0, u1, v0, v1;
    // parameter locations where the integrand has an integrable singularity
    std::vector<std::array<double, 2>> singular;
};

namespace detail {

struct Quad2DState {
    const BatchFn2D* f;
    int n;
    double rel_tol;
    int max_depth;
    double excl_diag; // force-refine singular panels down to this diagonal
    KahanComplexSum total;
    double err_accum = 0.0; // accepted refine deltas plus singular ring tails
    std::vector<double> ubuf, vbuf;
    std::vector<cdouble> fbuf;
};

struct PanelEval {
    cdouble integral;
    double l1;
};

// tensor Gauss-Legendre on [a0,a1]x[b0,b1], nodes walked in serpentine order
inline PanelEval tensor_panel(Quad2DState& st, double a0, double a1, double b0, double b1) {
    const GLRule& r = gauss_legendre(st.n);
    int n = st.n, cnt = n * n;
    st.ubuf.resize(static_cast<size_t>(cnt));
    st.vbuf.resize(static_cast<size_t>(cnt));
    st.fbuf.resize(static_cast<size_t>(cnt));
    double am = 0.5 * (a0 + a1), ah = 0.5 * (a1 - a0);
    double bm = 0.5 * (b0 + b1), bh = 0.5 * (b1 - b0);
    int idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            int j = (i % 2 == 0) ? jj : n - 1 - jj;
            st.ubuf[static_cast<size_t>(idx)] = am + ah * r.x[static_cast<size_t>(i)];
            st.vbuf[static_cast<size_t>(idx)] = bm + bh * r.x[static_cast<size_t>(j)];
            ++idx;
        }
    }
    (*st.f)(st.ubuf.data(), st.vbuf.data(), cnt, st.fbuf.data());
    KahanComplexSum acc;
    double l1 = 0.0;
    idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            int j = (i % 2 == 0) ? jj : n - 1 - jj;
            double w = r.w[static_cast<size_t>(i)] * r.w[static_cast<size_t>(j)];
            acc.add(w * st.fbuf[static_cast<size_t>(idx)]);
            l1 += w * std::abs(st.fbuf[static_cast<size_t>(idx)]);
            ++idx;
        }
    }
    double jac = ah * bh;
    return {jac * acc.value(), jac * l1};
}

// Polar fan around a singular point s inside the panel: integrate
// F du dv = F rho drho dphi, rho normalised to the distance R(phi) of the
// panel boundary, with geometrically shrinking rings toward s. The angular
// resolution is adaptive: an arc is accepted only once bisecting it moves the
// ring-cascade total by no more than its share of the error budget, so
// eccentric fans (s near an edge, R(phi) steep) cannot leave a converged bias.
inline cdouble fan_panel(Quad2DState& st, double a0, double a1, double b0, double b1,
                         double su, double sv) {
    struct Edge {
        double nx, ny, d; // unit outward normal and distance from s
    };
    // clamp s marginally inside so boundary-straddling points stay valid
    double eps_u = 1e-12 * (a1 - a0), eps_v = 1e-12 * (b1 - b0);
    su = std::min(std::max(su, a0 + eps_u), a1 - eps_u);
    sv = std::min(std::max(sv, b0 + eps_v), b1 - eps_v);

    const std::array<Edge, 4> edges = {{{1.0, 0.0, a1 - su},
                                        {0.0, 1.0, b1 - sv},
                                        {-1.0, 0.0, su - a0},
                                        {0.0, -1.0, sv - b0}}};
    const std::array<std::array<double, 2>, 4> corners = {{{a1, b1}, {a0, b1}, {a0, b0}, {a1, b0}}};

    const double two_pi = 6.283185307179586476925286766559;
    std::array<double, 4> cang{};
    for (int c = 0; c < 4; ++c) {
        cang[static_cast<size_t>(c)] =
            std::atan2(corners[static_cast<size_t>(c)][1] - sv, corners[static_cast<size_t>(c)][0] - su);
        if (c > 0)
            while (cang[static_cast<size_t>(c)] <= cang[static_cast<size_t>(c - 1)])
                cang[static_cast<size_t>(c)] += two_pi;
    }

    const GLRule& r = gauss_legendre(st.n);
    int n = st.n, cnt = 2 * n * n; // two stacked radial panels per ring

    struct Arc {
        cdouble val;
        double mass; // sum of |ring| contributions, scales the tolerance
        double tail; // last ring magnitude, proxy for the cut-off tail
    };

    std::vector<double> phis(static_cast<size_t>(n)), Rphi(static_cast<size_t>(n)),
        wphi(static_cast<size_t>(n)), rho(static_cast<size_t>(2 * n)),
        wrho(static_cast<size_t>(2 * n));

    auto arc_rings = [&](const Edge& e, double qa, double qb) -> Arc {
        st.ubuf.resize(static_cast<size_t>(cnt));
        st.vbuf.resize(static_cast<size_t>(cnt));
        st.fbuf.resize(static_cast<size_t>(cnt));
        for (int i = 0; i < n; ++i) {
            double phi = 0.5 * (qa + qb) + 0.5 * (qb - qa) * r.x[static_cast<size_t>(i)];
            double denom = e.nx * std::cos(phi) + e.ny * std::sin(phi);
            phis[static_cast<size_t>(i)] = phi;
            Rphi[static_cast<size_t>(i)] = e.d / std::max(denom, 1e-14);
            wphi[static_cast<size_t>(i)] = 0.5 * (qb - qa) * r.w[static_cast<size_t>(i)];
        }
        KahanComplexSum acc;
        double mass = 0.0;
        double rho_hi = 1.0;
        for (int ring = 0; ring < 96; ++ring) {
            double rho_lo = 0.5 * rho_hi, rho_m = 0.75 * rho_hi;
            for (int j = 0; j < n; ++j) {
                rho[static_cast<size_t>(j)] =
                    0.5 * (rho_lo + rho_m) + 0.5 * (rho_m - rho_lo) * r.x[static_cast<size_t>(j)];
                wrho[static_cast<size_t>(j)] = 0.5 * (rho_m - rho_lo) * r.w[static_cast<size_t>(j)];
                rho[static_cast<size_t>(n + j)] =
                    0.5 * (rho_m + rho_hi) + 0.5 * (rho_hi - rho_m) * r.x[static_cast<size_t>(j)];
                wrho[static_cast<size_t>(n + j)] = 0.5 * (rho_hi - rho_m) * r.w[static_cast<size_t>(j)];
            }
            int idx = 0;
            for (int i = 0; i < n; ++i) {
                double cp = std::cos(phis[static_cast<size_t>(i)]);
                double sp = std::sin(phis[static_cast<size_t>(i)]);
                for (int j = 0; j < 2 * n; ++j) {
                    st.ubuf[static_cast<size_t>(idx)] =
                        su + rho[static_cast<size_t>(j)] * Rphi[static_cast<size_t>(i)] * cp;
                    st.vbuf[static_cast<size_t>(idx)] =
                        sv + rho[static_cast<size_t>(j)] * Rphi[static_cast<size_t>(i)] * sp;
                    ++idx;
                }
            }
            (*st.f)(st.ubuf.data(), st.vbuf.data(), cnt, st.fbuf.data());
            KahanComplexSum racc;
            idx = 0;
            for (int i = 0; i < n; ++i) {
                double R2 = Rphi[static_cast<size_t>(i)] * Rphi[static_cast<size_t>(i)];
                for (int j = 0; j < 2 * n; ++j) {
                    racc.add(wphi[static_cast<size_t>(i)] * wrho[static_cast<size_t>(j)] *
                             st.fbuf[static_cast<size_t>(idx)] * rho[static_cast<size_t>(j)] * R2);
                    ++idx;
                }
            }
            cdouble ring_val = racc.value();
            acc.add(ring_val);
            mass += std::abs(ring_val);
            if (ring > 3 && std::abs(ring_val) <= 0.02 * st.rel_tol * mass)
                return {acc.value(), mass, std::abs(ring_val)};
            rho_hi = rho_lo;
        }
        throw convergence_error("quad2d: singular core rings did not converge");
    };

    KahanComplexSum total;

    std::function<void(const Edge&, double, double, const Arc&, int)> resolve =
        [&](const Edge& e, double qa, double qb, const Arc& whole, int depth) {
            double qm = 0.5 * (qa + qb);
            Arc left = arc_rings(e, qa, qm);
            Arc right = arc_rings(e, qm, qb);
            double delta = std::abs(whole.val - (left.val + right.val));
            if (delta <= 0.25 * st.rel_tol * (left.mass + right.mass)) {
                total.add(left.val);
                total.add(right.val);
                st.err_accum += delta + left.tail + right.tail;
                return;
            }
            if (depth >= 22)
                throw convergence_error("quad2d: singular fan angle refinement stalled");
            resolve(e, qa, qm, left, depth + 1);
            resolve(e, qm, qb, right, depth + 1);
        };

    for (int c = 0; c < 4; ++c) {
        double pa = cang[static_cast<size_t>(c)];
        double pb = (c < 3) ? cang[static_cast<size_t>(c + 1)] : cang[0] + two_pi;
        // within this corner sector the relevant boundary edge is fixed
        const Edge& e = edges[static_cast<size_t>((c + 1) % 4)];
        int pieces = std::max(1, static_cast<int>(std::ceil((pb - pa) / 1.2)));
        for (int pc = 0; pc < pieces; ++pc) {
            double qa = pa + (pb - pa) * pc / pieces;
            double qb = pa + (pb - pa) * (pc + 1) / pieces;
            resolve(e, qa, qb, arc_rings(e, qa, qb), 0);
        }
    }
    return total.value();
}

inline void quad2d_rec(Quad2DState& st, double a0, double a1, double b0, double b1,
                       const std::vector<std::array<double, 2>>& sing, int depth,
                       const PanelEval* self_opt) {
    // singular points inside (closed) this panel
    std::vector<std::array<double, 2>> here;
    double tu = 1e-12 * (a1 - a0), tv = 1e-12 * (b1 - b0);
    for (const auto& s : sing)
        if (s[0] >= a0 - tu && s[0] <= a1 + tu && s[1] >= b0 - tv && s[1] <= b1 + tv)
            here.push_back(s);

    double diag = std::hypot(a1 - a0, b1 - b0);

    if (!here.empty()) {
        if (here.size() == 1 && diag <= st.excl_diag) {
            st.total.add(fan_panel(st, a0, a1, b0, b1, here[0][0], here[0][1]));
            return;
        }
        if (depth >= st.max_depth)
            throw genericity_error("quad2d: singular points could not be separated");
        // split, nudging the cut lines off every singular point
        auto pick_cut = [&](double lo, double hi, int axis) {
            const double fracs[4] = {0.5, 0.53125, 0.4765625, 0.55078125};
            for (double frac : fracs) {
                double cut = lo + frac * (hi - lo);
                bool clear = true;
                for (const auto& s : here)
                    if (std::abs(s[static_cast<size_t>(axis)] - cut) < 1e-9 * (hi - lo)) {
                        clear = false;
                        break;
                    }
                if (clear) return cut;
            }
            return lo + 0.5 * (hi - lo);
        };
        double um = pick_cut(a0, a1, 0), vm = pick_cut(b0, b1, 1);
        quad2d_rec(st, a0, um, b0, vm, here, depth + 1, nullptr);
        quad2d_rec(st, um, a1, b0, vm, here, depth + 1, nullptr);
        quad2d_rec(st, a0, um, vm, b1, here, depth + 1, nullptr);
        quad2d_rec(st, um, a1, vm, b1, here, depth + 1, nullptr);
        return;
    }

    PanelEval self = self_opt ? *self_opt : tensor_panel(st, a0, a1, b0, b1);
    double um = 0.5 * (a0 + a1), vm = 0.5 * (b0 + b1);
    std::array<PanelEval, 4> kids = {
        tensor_panel(st, a0, um, b0, vm), tensor_panel(st, um, a1, b0, vm),
        tensor_panel(st, a0, um, vm, b1), tensor_panel(st, um, a1, vm, b1)};
    cdouble refined = 0.0;
    double l1 = 0.0;
    for (const auto& k : kids) {
        refined += k.integral;
        l1 += k.l1;
    }
    double err = std::abs(self.integral - refined);
    if (err <= st.rel_tol * l1) {
        st.total.add(refined);
        st.err_accum += err;
        return;
    }
    if (depth >= st.max_depth)
        throw convergence_error("quad2d: tolerance unreachable at max depth");
    quad2d_rec(st, a0, um, b0, vm, sing, depth + 1, &kids[0]);
    quad2d_rec(st, um, a1, b0, vm, sing, depth + 1, &kids[1]);
    quad2d_rec(st, a0, um, vm, b1, sing, depth + 1, &kids[2]);
    quad2d_rec(st, um, a1, vm, b1, sing, depth + 1, &kids[3]);
}

} // namespace detail

// Adaptive tensor quadrature over a rectangle with isolated integrable
// singularities. Panels containing a marked point are refined until the point
// is alone in a small core cell, which is then integrated by a polar fan with
// geometric rings; everything else uses a refine-and-compare quadtree with an
// error budget proportional to the local mass of |F|.
inline cdouble quad2d_adaptive(const BatchFn2D& f, const Quad2DRegion& region,
                               const QuadratureConfig& cfg, double* err_out = nullptr) {
    detail::Quad2DState st;
    st.f = &f;
    st.n = cfg.nodes_per_panel;
    st.rel_tol = cfg.quad_rel_tol;
    st.max_depth = cfg.max_depth;
    st.excl_diag =
        cfg.sing_exclusion * std::hypot(region.u1 - region.u0, region.v1 - region.v0);
    detail::quad2d_rec(st, region.u0, region.u1, region.v0, region.v1, region.singular, 0,
                       nullptr);
    if (err_out) *err_out = st.err_accum;
    return st.total.value();
}

} // namespace arakelov
