#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

// Bad user input: malformed coefficients, wrong degrees, inconsistent options.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A matrix or quadratic form failed a rank / definiteness / conditioning requirement.
struct numeric_degeneracy : std::runtime_error {
    numeric_degeneracy(const std::string& what, double condition = 0.0)
        : std::runtime_error(what), condition_estimate(condition) {}
    double condition_estimate;
};

// An integration path could not be kept clear of branch points.
struct path_refinement_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The defining polynomial has a repeated root.
struct singular_curve_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The computed homology basis failed one of its certificates
// (symplectic pairing, positive definite Im tau, half-period table).
struct basis_inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature / extrapolation failed to reach the requested tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sampled evaluation points stayed degenerate after the allowed number of retries.
struct genericity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quantity was requested at a point where it is singular by design
// (density at a branch point, Green function too close to a Weierstrass point).
struct singular_point_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Family membership conditions failed (monicity, degree, unit values, discriminant).
struct family_condition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace arakelov
