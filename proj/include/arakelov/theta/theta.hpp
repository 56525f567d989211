#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/numerics/kahan.hpp"
#include "arakelov/numerics/linalg.hpp"
#include "arakelov/theta/siegel.hpp"

namespace arakelov {

// Riemann theta with gradient, organised around one fixed tau.
//
// Arguments are reduced into the fundamental cell first; the translation-
// invariant norm log||theta|| is assembled directly from reduced data so no
// exponential prefactor is ever materialised. The summation box is fixed per
// tau from the smallest eigenvalue of Im tau, with a per-point prefilter that
// keeps the term set symmetric under the lattice reduction.
class ThetaEvaluator {
public:
    ThetaEvaluator(SiegelPoint sp, double eps = 1e-12) : sp_(std::move(sp)), eps_(eps) {
        const double pi = 3.14159265358979323846264338328;
        int g = sp_.g;
        double sg2 = 0.5 * std::sqrt(static_cast<double>(g));

        auto shell_count = [&](int j) {
            double hi = 1.0, lo = 1.0;
            for (int k = 0; k < g; ++k) {
                hi *= 2.0 * j + 1.0;
                lo *= 2.0 * j - 1.0;
            }
            return hi - lo;
        };
        int J = 2;
        for (; J <= 48; ++J) {
            double tail = 0.0;
            for (int j = J + 1; j <= J + 200; ++j) {
                double t = std::max(0.0, j - sg2);
                tail += shell_count(j) * std::exp(-pi * sp_.lambda_min * t * t);
            }
            if (tail < eps) break;
        }
        if (J > 48)
            throw numeric_degeneracy(
                "theta: required summation radius too large; Im tau nearly degenerate",
                sp_.lambda_min);
        J_ = J + 2; // margin so gradient terms meet the same target

        // lexicographic enumeration with the radial prefilter
        double keep = (std::log(1.0 / eps) + 6.0) / (pi * sp_.lambda_min);
        std::vector<int> n(static_cast<size_t>(g), -J_);
        std::vector<double> tau_re(static_cast<size_t>(g) * g), tau_im(static_cast<size_t>(g) * g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                tau_re[static_cast<size_t>(i) * g + j] = sp_.tau.at(i, j).real();
                tau_im[static_cast<size_t>(i) * g + j] = sp_.tau.at(i, j).imag();
            }
        while (true) {
            double m2 = 0.0;
            for (int k = 0; k < g; ++k) {
                double m = std::max(std::abs(static_cast<double>(n[static_cast<size_t>(k)])) - 0.5, 0.0);
                m2 += m * m;
            }
            if (m2 <= keep) {
                double qre = 0.0, qim = 0.0;
                for (int i = 0; i < g; ++i)
                    for (int j = 0; j < g; ++j) {
                        double nn = static_cast<double>(n[static_cast<size_t>(i)]) *
                                    static_cast<double>(n[static_cast<size_t>(j)]);
                        qre += tau_re[static_cast<size_t>(i) * g + j] * nn;
                        qim += tau_im[static_cast<size_t>(i) * g + j] * nn;
                    }
                // exp(pi i n.tau.n), modulus exp(-pi n.Y.n) <= 1
                double mod = std::exp(-pi * qim);
                lattice_.insert(lattice_.end(), n.begin(), n.end());
                qcache_.push_back(mod * cdouble(std::cos(pi * qre), std::sin(pi * qre)));
            }
            int k = g - 1;
            while (k >= 0 && n[static_cast<size_t>(k)] == J_) {
                n[static_cast<size_t>(k)] = -J_;
                --k;
            }
            if (k < 0) break;
            ++n[static_cast<size_t>(k)];
        }
    }

    const SiegelPoint& siegel() const { return sp_; }
    int radius() const { return J_; }
    size_t term_count() const { return qcache_.size(); }

    struct Reduced {
        std::vector<cdouble> z;   // representative in the fundamental cell
        std::vector<double> n0;   // integer lattice part along tau
        double quad;              // Im(z)^T Yinv Im(z) at the representative
    };

    Reduced reduce(const std::vector<cdouble>& z) const {
        int g = sp_.g;
        Reduced r;
        r.z.assign(static_cast<size_t>(g), 0.0);
        r.n0.assign(static_cast<size_t>(g), 0.0);
        std::vector<double> y(static_cast<size_t>(g));
        for (int i = 0; i < g; ++i) y[static_cast<size_t>(i)] = z[static_cast<size_t>(i)].imag();
        for (int i = 0; i < g; ++i) {
            double c = 0.0;
            for (int j = 0; j < g; ++j)
                c += sp_.Yinv[static_cast<size_t>(i) * g + j] * y[static_cast<size_t>(j)];
            r.n0[static_cast<size_t>(i)] = std::floor(c + 0.5);
        }
        for (int i = 0; i < g; ++i) {
            cdouble v = z[static_cast<size_t>(i)];
            for (int j = 0; j < g; ++j) v -= sp_.tau.at(i, j) * r.n0[static_cast<size_t>(j)];
            v -= std::floor(v.real() + 0.5);
            r.z[static_cast<size_t>(i)] = v;
        }
        std::vector<double> yr(static_cast<size_t>(g));
        for (int i = 0; i < g; ++i) yr[static_cast<size_t>(i)] = r.z[static_cast<size_t>(i)].imag();
        r.quad = sp_.quad_yinv(yr);
        return r;
    }

    struct Value {
        cdouble value;               // theta at the reduced point
        std::vector<cdouble> grad;   // gradient at the reduced point, if requested
    };

    Value eval_reduced(const std::vector<cdouble>& zr, bool with_grad) const {
        const double two_pi = 6.283185307179586476925286766559;
        int g = sp_.g;
        int width = 2 * J_ + 1;
        std::vector<cdouble> pw(static_cast<size_t>(g) * width);
        for (int k = 0; k < g; ++k) {
            cdouble zk = zr[static_cast<size_t>(k)];
            cdouble base = std::exp(cdouble(0.0, two_pi) * zk);
            cdouble cur = std::exp(cdouble(0.0, -two_pi * J_) * zk);
            for (int t = 0; t < width; ++t) {
                pw[static_cast<size_t>(k) * width + t] = cur;
                cur *= base;
            }
        }
        KahanComplexSum sum;
        std::vector<KahanComplexSum> gsum(with_grad ? static_cast<size_t>(g) : 0);
        size_t terms = qcache_.size();
        for (size_t t = 0; t < terms; ++t) {
            const int* n = &lattice_[t * static_cast<size_t>(g)];
            cdouble term = qcache_[t];
            for (int k = 0; k < g; ++k)
                term *= pw[static_cast<size_t>(k) * width + (n[k] + J_)];
            sum.add(term);
            if (with_grad)
                for (int k = 0; k < g; ++k)
                    gsum[static_cast<size_t>(k)].add(term * static_cast<double>(n[k]));
        }
        Value v;
        v.value = sum.value();
        if (with_grad) {
            v.grad.resize(static_cast<size_t>(g));
            for (int k = 0; k < g; ++k)
                v.grad[static_cast<size_t>(k)] = cdouble(0.0, two_pi) * gsum[static_cast<size_t>(k)].value();
        }
        return v;
    }

    // log ||theta||(z): translation invariant, safe for arbitrarily large z.
    double norm_log(const std::vector<cdouble>& z) const {
        const double pi = 3.14159265358979323846264338328;
        Reduced r = reduce(z);
        Value v = eval_reduced(r.z, false);
        return 0.25 * sp_.log_det_Y - pi * r.quad + std::log(std::abs(v.value));
    }

    // raw theta value; fine for moderate arguments, tests and g=1 formulas
    cdouble value(const std::vector<cdouble>& z) const {
        const double pi = 3.14159265358979323846264338328;
        Reduced r = reduce(z);
        Value v = eval_reduced(r.z, false);
        cdouble expo = 0.0;
        for (int i = 0; i < sp_.g; ++i) {
            cdouble ti = 0.0;
            for (int j = 0; j < sp_.g; ++j)
                ti += sp_.tau.at(i, j) * r.n0[static_cast<size_t>(j)];
            expo += -cdouble(0.0, pi) * r.n0[static_cast<size_t>(i)] * ti -
                    cdouble(0.0, 2.0 * pi) * r.n0[static_cast<size_t>(i)] * r.z[static_cast<size_t>(i)];
        }
        return std::exp(expo) * v.value;
    }

    // gradient of theta at z (same prefactor chain as value())
    std::vector<cdouble> gradient(const std::vector<cdouble>& z) const {
        const double pi = 3.14159265358979323846264338328;
        Reduced r = reduce(z);
        Value v = eval_reduced(r.z, true);
        cdouble expo = 0.0;
        for (int i = 0; i < sp_.g; ++i) {
            cdouble ti = 0.0;
            for (int j = 0; j < sp_.g; ++j)
                ti += sp_.tau.at(i, j) * r.n0[static_cast<size_t>(j)];
            expo += -cdouble(0.0, pi) * r.n0[static_cast<size_t>(i)] * ti -
                    cdouble(0.0, 2.0 * pi) * r.n0[static_cast<size_t>(i)] * r.z[static_cast<size_t>(i)];
        }
        cdouble pre = std::exp(expo);
        std::vector<cdouble> out(static_cast<size_t>(sp_.g));
        for (int k = 0; k < sp_.g; ++k)
            out[static_cast<size_t>(k)] =
                pre * (v.grad[static_cast<size_t>(k)] -
                       cdouble(0.0, 2.0 * pi) * r.n0[static_cast<size_t>(k)] * v.value);
        return out;
    }

    // log of the gradient-determinant norm at arguments w_1..w_g:
    // (g+2)/4 log det Y - pi sum quad(w_l) + log |det d theta(w_l)|,
    // assembled from reduced data so lattice shifts of the w_l cancel exactly.
    double j_norm_log(const std::vector<std::vector<cdouble>>& w) const {
        const double pi = 3.14159265358979323846264338328;
        int g = sp_.g;
        if (static_cast<int>(w.size()) != g)
            throw invalid_input("j_norm_log: need exactly g argument vectors");
        CMat M(g, g);
        double expo = 0.0;
        for (int l = 0; l < g; ++l) {
            Reduced r = reduce(w[static_cast<size_t>(l)]);
            Value v = eval_reduced(r.z, true);
            expo -= pi * r.quad;
            for (int k = 0; k < g; ++k)
                M.at(k, l) = v.grad[static_cast<size_t>(k)] -
                             cdouble(0.0, 2.0 * pi) * r.n0[static_cast<size_t>(k)] * v.value;
        }
        return 0.25 * (g + 2) * sp_.log_det_Y + expo + mat_log_abs_det(M);
    }

private:
    SiegelPoint sp_;
    double eps_;
    int J_ = 0;
    std::vector<int> lattice_;
    std::vector<cdouble> qcache_;
};

} // namespace arakelov
