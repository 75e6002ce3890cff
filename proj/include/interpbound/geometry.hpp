#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "interpbound/sample_set.hpp"

namespace interpbound {

struct MuTable; // built in bounds.hpp; classify only reads its minimum

/// Phi has row i = (1, y_i - y0). Nonsingular iff the sample set is
/// affinely independent.
struct PhiMatrix {
    Eigen::MatrixXd phi;
    double cond = 0.0;
};

PhiMatrix build_phi(const SampleSet& s, const Tolerances& tol = {});

/// Barycentric coordinates of y0 in the extended convention: index 0 is
/// y0 itself with ell[0] = -1, indices 1..n+1 are the sample points
/// sorted so that ell[1] >= ell[2] >= ... >= ell[n+1].
struct BarycentricData {
    Eigen::VectorXd ell;      // size n+2
    std::vector<int> order;   // sorted slot k+1 holds s.points[order[k]]
    std::vector<int> i_plus;  // extended indices with ell > tol
    std::vector<int> i_minus; // extended indices with ell < -tol
    double tol = 0.0;         // absolute sign tolerance in effect

    int n_plus() const { return static_cast<int>(i_plus.size()); }
    int n_minus() const { return static_cast<int>(i_minus.size()); }
    /// Slot of an original point index in the sorted order (1-based
    /// extended index).
    int slot_of(int original_index) const;
};

BarycentricData barycentric(const SampleSet& s, const Tolerances& tol = {});

/// Point behind an extended index: y0 for 0, the sorted samples for
/// 1..n+1.
const Eigen::VectorXd& point_at(const SampleSet& s, const BarycentricData& b, int i);

/// Rows i = x_i - y0 of the sorted sample points, (n+1) x n.
Eigen::MatrixXd sorted_offsets(const SampleSet& s, const BarycentricData& b);

/// Moment matrix G and its eigendecomposition split by sign. The counts
/// of the sign blocks obey the inertia relation with the index sets.
struct MomentSpectrum {
    Eigen::MatrixXd G;
    Eigen::VectorXd lambda_plus;  // descending
    Eigen::VectorXd lambda_minus; // descending magnitude (most negative first)
    Eigen::MatrixXd P_plus;       // n x |lambda_plus|
    Eigen::MatrixXd P_minus;      // n x |lambda_minus|
    Eigen::MatrixXd P_zero;       // n x (rest)
};

MomentSpectrum moment_matrix(const SampleSet& s, const BarycentricData& b,
                             const Tolerances& tol = {});

/// Max-abs entry of sum_i ell_i (y_i - u1)(y_i - u2)^T - G. The sum is
/// independent of (u1, u2), so this probes round-off only.
double recentring_residual(const SampleSet& s, const BarycentricData& b,
                           const Eigen::VectorXd& u1, const Eigen::VectorXd& u2);

/// True iff no vertex of the simplex carries an obtuse angle:
/// <y_j - y_i, y_k - y_i> >= -tol for all vertex triples.
bool is_acute_simplex(const SampleSet& s, const Tolerances& tol = {});

enum class Region {
    ConvexHull,
    SinglePositive,
    MuNonnegative,
    ObtuseTriangle,       // n = 2 only, with canonical permutation
    ObtuseCone,           // n = 2 only, with canonical permutation
    MuNegativeUnresolved, // n >= 3 with a negative mu entry
};

const char* region_name(Region r);

/// Result of the region classification. When y0 sits within tolerance of
/// a region boundary the boundary flag is set and both candidate tags
/// are reported; the bounds coincide there, so either is usable.
struct RegionClassification {
    Region tag = Region::ConvexHull;
    /// Original point indices taking the roles (y1, y2, y3) of the
    /// bivariate obtuse configurations. Only set for those two tags.
    std::optional<std::array<int, 3>> perm;
    bool boundary = false;
    std::optional<Region> alternate;
    std::optional<std::array<int, 3>> alternate_perm;
    std::optional<double> mu_min;
};

/// Region classification. mu may be null when the decision is already
/// settled by the coordinate signs (convex hull or a single positive
/// entry); otherwise it is required.
RegionClassification classify(const SampleSet& s, const BarycentricData& b,
                              const MuTable* mu, const Tolerances& tol = {});

} // namespace interpbound
