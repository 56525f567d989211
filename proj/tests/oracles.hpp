#pragma once

// Slow, independently written reference implementations. Everything here is a
// direct transcription of defining series/sums with naive loops, kept apart
// from the library code on purpose.

#include <cmath>
#include <complex>
#include <vector>

#include "arakelov/numerics/linalg.hpp"

namespace oracles {

using arakelov::cdouble;
using arakelov::CMat;

inline const double pi = 3.14159265358979323846264338328;

// theta by brute triple/box sum, no reduction, no truncation logic
inline cdouble theta_brute(const std::vector<cdouble>& z, const CMat& tau, int J = 30) {
    int g = tau.rows;
    std::vector<int> n(static_cast<size_t>(g), -J);
    cdouble total = 0.0;
    while (true) {
        cdouble q = 0.0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                q += tau.at(i, j) * static_cast<double>(n[static_cast<size_t>(i)]) *
                     static_cast<double>(n[static_cast<size_t>(j)]);
        cdouble lin = 0.0;
        for (int i = 0; i < g; ++i)
            lin += static_cast<double>(n[static_cast<size_t>(i)]) * z[static_cast<size_t>(i)];
        total += std::exp(cdouble(0.0, pi) * q + cdouble(0.0, 2.0 * pi) * lin);
        int k = g - 1;
        while (k >= 0 && n[static_cast<size_t>(k)] == J) {
            n[static_cast<size_t>(k)] = -J;
            --k;
        }
        if (k < 0) break;
        ++n[static_cast<size_t>(k)];
    }
    return total;
}

// Dedekind eta via the defining product, q = exp(2 pi i tau)
inline cdouble dedekind_eta(cdouble tau, int terms = 64) {
    cdouble q = std::exp(cdouble(0.0, 2.0 * pi) * tau);
    cdouble prod = 1.0;
    cdouble qn = 1.0;
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        prod *= (1.0 - qn);
    }
    return std::exp(cdouble(0.0, pi) * tau / 12.0) * prod;
}

} // namespace oracles
