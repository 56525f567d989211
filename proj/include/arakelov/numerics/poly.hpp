#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov {

using cdouble = std::complex<double>;

// Dense univariate polynomial, coefficients stored ascending: c[k] multiplies x^k.
struct Poly {
    std::vector<cdouble> c;

    Poly() = default;
    explicit Poly(std::vector<cdouble> coeffs) : c(std::move(coeffs)) {}

    // File and CLI conventions list coefficients leading-first.
    static Poly from_leading_first(const std::vector<cdouble>& lead_first) {
        return Poly(std::vector<cdouble>(lead_first.rbegin(), lead_first.rend()));
    }

    int degree() const {
        for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
            if (c[static_cast<size_t>(k)] != 0.0) return k;
        return -1;
    }

    cdouble eval(cdouble x) const {
        cdouble acc = 0.0;
        for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }

    // value and first derivative in one Horner pass
    std::pair<cdouble, cdouble> eval_d(cdouble x) const {
        cdouble p = 0.0, dp = 0.0;
        for (size_t k = c.size(); k-- > 0;) {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        return {p, dp};
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly{{}};
        std::vector<cdouble> d(c.size() - 1);
        for (size_t k = 1; k < c.size(); ++k)
            d[k - 1] = static_cast<double>(k) * c[k];
        return Poly(std::move(d));
    }

    cdouble leading() const {
        int d = degree();
        if (d < 0) throw invalid_input("leading coefficient of zero polynomial");
        return c[static_cast<size_t>(d)];
    }
};

inline Poly poly_from_roots(const std::vector<cdouble>& roots, cdouble lead = 1.0) {
    std::vector<cdouble> a{lead};
    for (cdouble r : roots) {
        std::vector<cdouble> b(a.size() + 1, 0.0);
        for (size_t k = 0; k < a.size(); ++k) {
            b[k] += -r * a[k];
            b[k + 1] += a[k];
        }
        a = std::move(b);
    }
    return Poly(std::move(a));
}

// max_k |p_k - q_k| / max_k |q_k|
inline double poly_rel_error(const Poly& p, const Poly& q) {
    size_t n = std::max(p.c.size(), q.c.size());
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < n; ++k) {
        cdouble pk = k < p.c.size() ? p.c[k] : 0.0;
        cdouble qk = k < q.c.size() ? q.c[k] : 0.0;
        num = std::max(num, std::abs(pk - qk));
        den = std::max(den, std::abs(qk));
    }
    return den > 0.0 ? num / den : num;
}

} // namespace arakelov
