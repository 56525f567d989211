#pragma once

#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/theta/siegel.hpp"

namespace arakelov {

// Half-integer theta characteristic [a; b], stored as twice the entries so
// everything is 0/1 arithmetic mod 2.
struct Characteristic {
    std::vector<int> a2, b2;

    int genus() const { return static_cast<int>(a2.size()); }

    bool odd() const {
        int s = 0;
        for (size_t k = 0; k < a2.size(); ++k) s += a2[k] * b2[k];
        return (s % 2) != 0;
    }

    Characteristic plus(const Characteristic& o) const {
        Characteristic r = *this;
        for (size_t k = 0; k < a2.size(); ++k) {
            r.a2[k] = (r.a2[k] + o.a2[k]) % 2;
            r.b2[k] = (r.b2[k] + o.b2[k]) % 2;
        }
        return r;
    }

    // image tau*a + b in C^g
    std::vector<cdouble> point(const SiegelPoint& sp) const {
        std::vector<cdouble> z(static_cast<size_t>(sp.g), 0.0);
        for (int i = 0; i < sp.g; ++i) {
            cdouble s = 0.5 * static_cast<double>(b2[static_cast<size_t>(i)]);
            for (int j = 0; j < sp.g; ++j)
                s += sp.tau.at(i, j) * (0.5 * a2[static_cast<size_t>(j)]);
            z[static_cast<size_t>(i)] = s;
        }
        return z;
    }
};

// Standard table attached to a branch ordering b_1, .., b_{2g+1}, infinity of
// an odd-degree hyperelliptic model with base point at infinity. Index k runs
// 1..2g+2; the last entry (infinity) is the zero characteristic.
inline Characteristic branch_characteristic(int k, int g) {
    if (k < 1 || k > 2 * g + 2) throw invalid_input("branch_characteristic: bad index");
    Characteristic c;
    c.a2.assign(static_cast<size_t>(g), 0);
    c.b2.assign(static_cast<size_t>(g), 0);
    if (k <= 2 * g) {
        int i = (k + 1) / 2; // 1-based block
        c.a2[static_cast<size_t>(i - 1)] = 1;
        int upto = (k % 2 == 1) ? i - 1 : i;
        for (int j = 1; j <= upto; ++j) c.b2[static_cast<size_t>(j - 1)] = 1;
    } else if (k == 2 * g + 1) {
        for (int j = 1; j <= g; ++j) c.b2[static_cast<size_t>(j - 1)] = 1;
    }
    return c;
}

// Vector of Riemann constants for base point infinity: sum over the odd
// branch indices. It is always a two-torsion point here.
inline Characteristic riemann_kappa_char(int g) {
    Characteristic k;
    k.a2.assign(static_cast<size_t>(g), 0);
    k.b2.assign(static_cast<size_t>(g), 0);
    for (int j = 1; j <= 2 * g + 1; j += 2) k = k.plus(branch_characteristic(j, g));
    return k;
}

// The even characteristics whose theta constants stay nonzero on the
// hyperelliptic locus: one for each split of the 2g+2 branch points into two
// halves of size g+1, normalised so the part S avoids infinity.
inline std::vector<Characteristic> balanced_even_characteristics(int g) {
    int m = 2 * g + 1;
    std::vector<Characteristic> out;
    std::vector<int> pick(static_cast<size_t>(g + 1));
    for (int i = 0; i <= g; ++i) pick[static_cast<size_t>(i)] = i + 1;

    auto emit = [&]() {
        std::vector<int> in_s(static_cast<size_t>(m + 1), 0);
        for (int v : pick) in_s[static_cast<size_t>(v)] = 1;
        Characteristic c;
        c.a2.assign(static_cast<size_t>(g), 0);
        c.b2.assign(static_cast<size_t>(g), 0);
        for (int k = 1; k <= m; ++k) {
            bool in_u = (k % 2 == 1);
            if (in_s[static_cast<size_t>(k)] != (in_u ? 1 : 0))
                c = c.plus(branch_characteristic(k, g));
        }
        if (c.odd())
            throw basis_inconsistency_error(
                "balanced characteristic came out odd; table broken");
        out.push_back(std::move(c));
    };

    // lexicographic enumeration of (g+1)-subsets of {1..m}
    while (true) {
        emit();
        int i = g;
        while (i >= 0 && pick[static_cast<size_t>(i)] == m - (g - i)) --i;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
        for (int j = i + 1; j <= g; ++j)
            pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

} // namespace arakelov
