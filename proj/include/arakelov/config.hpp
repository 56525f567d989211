#pragma once

#include <cstdint>

namespace arakelov {

// Shared tuning knobs, threaded explicitly so runs are reproducible.
struct QuadratureConfig {
    double theta_eps = 1e-12;        // absolute truncation target for theta sums
    double quad_rel_tol = 1e-6;      // relative tolerance for adaptive rules
    double quad_abs_floor = 0.0;     // per-panel absolute error floor; rescues
                                     // integrands whose evaluation noise near a
                                     // root exceeds the relative tolerance
    int max_depth = 24;              // subdivision depth cap (1D and 2D)
    int nodes_per_panel = 8;         // Gauss-Legendre nodes per panel edge
    double sing_exclusion = 0.05;    // param-space radius treated as singular core
    std::uint64_t seed = 1;          // RNG stream for sampled point configurations
};

} // namespace arakelov
