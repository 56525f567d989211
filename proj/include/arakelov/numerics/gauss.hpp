#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "arakelov/config.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/numerics/kahan.hpp"
#include "arakelov/numerics/poly.hpp"

namespace arakelov {

struct GLRule {
    std::vector<double> x, w; // nodes and weights on [-1,1]
};

// Newton on the Legendre recurrence; nodes cached per order.
inline const GLRule& gauss_legendre(int n) {
    static std::map<int, GLRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw invalid_input("gauss_legendre: order must be positive");

    GLRule rule;
    rule.x.resize(static_cast<size_t>(n));
    rule.w.resize(static_cast<size_t>(n));
    const double pi = 3.14159265358979323846264338328;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[static_cast<size_t>(i)] = x;
        rule.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// Fixed-order rule for a vector-valued integrand on [a,b].
// f(t, out) fills out[0..dim); the result is accumulated into value and the
// node-wise |f| mass into l1 (used by the adaptive driver for error budgets).
using VecIntegrand = std::function<void(double, cdouble*)>;

inline void gl_panel_vec(const VecIntegrand& f, double a, double b, int nodes, int dim,
                         std::vector<cdouble>& value, std::vector<double>& l1) {
    const GLRule& rule = gauss_legendre(nodes);
    value.assign(static_cast<size_t>(dim), 0.0);
    l1.assign(static_cast<size_t>(dim), 0.0);
    std::vector<cdouble> buf(static_cast<size_t>(dim));
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<KahanComplexSum> acc(static_cast<size_t>(dim));
    for (size_t i = 0; i < rule.x.size(); ++i) {
        f(mid + half * rule.x[i], buf.data());
        for (int k = 0; k < dim; ++k) {
            acc[static_cast<size_t>(k)].add(rule.w[i] * buf[static_cast<size_t>(k)]);
            l1[static_cast<size_t>(k)] += rule.w[i] * std::abs(buf[static_cast<size_t>(k)]);
        }
    }
    for (int k = 0; k < dim; ++k) {
        value[static_cast<size_t>(k)] = half * acc[static_cast<size_t>(k)].value();
        l1[static_cast<size_t>(k)] *= std::abs(half);
    }
}

namespace detail {

struct AdaptState {
    const VecIntegrand* f;
    int dim;
    int nodes;
    double rel_tol;
    double abs_floor;
    int max_depth;
    std::vector<KahanComplexSum> total;
    int panels = 0;
};

inline void adapt_rec(AdaptState& st, double a, double b, int depth,
                      const std::vector<cdouble>& whole) {
    double mid = 0.5 * (a + b);
    std::vector<cdouble> left, right;
    std::vector<double> l1l, l1r;
    gl_panel_vec(*st.f, a, mid, st.nodes, st.dim, left, l1l);
    gl_panel_vec(*st.f, mid, b, st.nodes, st.dim, right, l1r);

    bool ok = true;
    for (int k = 0; k < st.dim; ++k) {
        double err = std::abs(whole[static_cast<size_t>(k)] -
                              (left[static_cast<size_t>(k)] + right[static_cast<size_t>(k)]));
        double budget = st.rel_tol * (l1l[static_cast<size_t>(k)] + l1r[static_cast<size_t>(k)]) +
                        st.abs_floor;
        if (err > budget) { ok = false; break; }
    }
    if (ok || depth >= st.max_depth) {
        if (!ok)
            throw convergence_error("adaptive_gl: tolerance unreachable at max depth");
        for (int k = 0; k < st.dim; ++k)
            st.total[static_cast<size_t>(k)].add(left[static_cast<size_t>(k)] +
                                                 right[static_cast<size_t>(k)]);
        st.panels += 2;
        return;
    }
    adapt_rec(st, a, mid, depth + 1, left);
    adapt_rec(st, mid, b, depth + 1, right);
}

} // namespace detail

// Adaptive composite Gauss-Legendre for a vector integrand. Error control is
// per component against rel_tol times the integral of |f_k|, so components of
// very different magnitude are each resolved in relative terms.
inline std::vector<cdouble> adaptive_gl_vec(const VecIntegrand& f, double a, double b,
                                            int dim, const QuadratureConfig& cfg) {
    detail::AdaptState st;
    st.f = &f;
    st.dim = dim;
    st.nodes = cfg.nodes_per_panel;
    st.rel_tol = cfg.quad_rel_tol;
    st.abs_floor = cfg.quad_abs_floor;
    st.max_depth = cfg.max_depth;
    st.total.assign(static_cast<size_t>(dim), KahanComplexSum{});

    std::vector<cdouble> whole;
    std::vector<double> l1;
    gl_panel_vec(f, a, b, st.nodes, dim, whole, l1);
    detail::adapt_rec(st, a, b, 0, whole);

    std::vector<cdouble> out(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) out[static_cast<size_t>(k)] = st.total[static_cast<size_t>(k)].value();
    return out;
}

inline cdouble adaptive_gl(const std::function<cdouble(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
    VecIntegrand wrap = [&](double t, cdouble* out) { out[0] = f(t); };
    return adaptive_gl_vec(wrap, a, b, 1, cfg)[0];
}

} // namespace arakelov
