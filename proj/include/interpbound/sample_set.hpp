#pragma once

#include <vector>

#include <Eigen/Dense>

namespace interpbound {

/// Numerical thresholds shared across the library. The defaults are what
/// every entry point uses unless the caller overrides them.
struct Tolerances {
    /// Relative sign tolerance for the barycentric coordinates and the
    /// mu certificate: a value x counts as positive when
    /// x > sign_rel * max(1, scale).
    double sign_rel = 1e-9;
    /// Condition-number limit for Phi (affine independence) and for the
    /// matrix inverted while building the mu table.
    double cond_limit = 1e12;
    /// Eigenvalues of G with |lambda| <= eig_zero_rel * max|lambda| are
    /// treated as zero and excluded from both sign blocks.
    double eig_zero_rel = 1e-10;
};

/// An interpolation instance: n+1 sample points in R^n, the evaluation
/// point y0, and the gradient Lipschitz constant L.
struct SampleSet {
    int n = 0;
    std::vector<Eigen::VectorXd> points; // exactly n+1 entries
    Eigen::VectorXd y0;
    double L = 1.0;

    /// Throws InvalidInput on structural problems (sizes, L <= 0,
    /// non-finite entries). Affine independence is certified separately
    /// by build_phi.
    void validate() const;

    /// Largest pairwise distance among the sample points and y0.
    double diameter() const;
};

} // namespace interpbound
