#pragma once

namespace arakelov {

// Faltings delta invariant from the S and T invariants
inline double compute_delta(double log_s, double log_t, int g) {
    return 4.0 * (log_t - (g - 1.0) / (static_cast<double>(g) * g) * log_s);
}

// log R(X), the remaining piece of the S/T/delta triangle
inline double compute_r(double log_s, double delta) { return log_s - delta / 8.0; }

} // namespace arakelov
