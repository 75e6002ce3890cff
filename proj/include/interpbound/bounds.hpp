#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "interpbound/geometry.hpp"
#include "interpbound/sample_set.hpp"
#include "interpbound/witness.hpp"

namespace interpbound {

/// The nonnegativity certificate of the worst-quadratic bound. Entry
/// (i, j) couples row index i in I+ with column index j in I-; column 0
/// always belongs to extended index 0 (the evaluation point).
struct MuTable {
    Eigen::MatrixXd mu;    // |I+| x |I-|
    std::vector<int> rows; // extended indices of I+
    std::vector<int> cols; // extended indices of I-, cols[0] == 0
    double min_entry = 0.0;
    /// False when the inverted matrix was ill-conditioned; the table is
    /// still returned but should not be trusted as a certificate.
    bool reliable = true;
    double cond = 1.0; // condition number of Y- P- (1 when no inversion)

    // Residuals of the four defining identities, for diagnostics.
    double residual_row_sums = 0.0;
    double residual_col_sums = 0.0;
    double residual_proj_plus = 0.0;
    double residual_proj_minus = 0.0;
};

MuTable mu_table(const SampleSet& s, const BarycentricData& b,
                 const MomentSpectrum& ms, const Tolerances& tol = {});

/// Worst-case Hessian. The spectral form is symmetric with eigenvalues
/// in {-L, 0, +L}; the bivariate form is oblique with prescribed
/// eigendirections and eigenvalues +L and -L.
struct HStarMatrix {
    enum class Kind { SymmetricSpectral, BivariateOblique };
    Eigen::MatrixXd H;
    Kind kind = Kind::SymmetricSpectral;
};

HStarMatrix hstar_spectral(const MomentSpectrum& ms, double L);

enum class Method { Phase1, Waldron, Phase2, Phase3Triangle, Phase3Cone };
enum class Sharpness { ProvenSharp, ValidNotProvenSharp };

const char* method_name(Method m);

struct BoundReport {
    double value = 0.0;
    Method method = Method::Phase1;
    Sharpness sharp = Sharpness::ValidNotProvenSharp;
    std::optional<MuTable> certificate;
    std::optional<WorstCaseFunction> witness;

    double phase1_value = 0.0;                // always filled
    std::optional<double> phase2_value;
    std::optional<double> mu_min;
    /// Set on a phase-2 report whose certificate has a negative entry:
    /// the value is then exact over quadratics only, not a bound for the
    /// whole class.
    bool quadratics_only = false;
    /// Set when y0 was within tolerance of a region boundary and the
    /// report is the minimum over both candidate regions.
    bool boundary = false;

    bool proven_sharp() const { return sharp == Sharpness::ProvenSharp; }
};

/// (L/2) sum_i |ell_i| ||y_i - u||^2, valid for every u.
double phase1_bound_at(const SampleSet& s, const BarycentricData& b,
                       const Eigen::VectorXd& u);

/// The minimizer w = sum |ell_i| y_i / sum |ell_i| of the phase-1 bound.
Eigen::VectorXd phase1_minimizer(const SampleSet& s, const BarycentricData& b);

/// Phase-1 bound at the minimizing w. Proven sharp on the convex hull
/// and in the single-positive vertex cones, with the signed-sphere
/// witness attached.
BoundReport phase1_bound(const SampleSet& s, const BarycentricData& b);

/// (L/2) sum_i ell_i ||y_i - y0||^2; a valid bound only on the convex
/// hull.
double waldron_bound(const SampleSet& s, const BarycentricData& b);

/// Worst error over quadratic members of the class: <G, H*>/2, cross
/// checked against (L/2) sum |lambda|. Proven sharp iff the mu table is
/// nonnegative.
BoundReport phase2_bound(const SampleSet& s, const BarycentricData& b,
                         const MomentSpectrum& ms, const Tolerances& tol = {});

/// The inequality kernel: nonpositive for every f with L-Lipschitz
/// gradient, any pair of points and any square matrix H.
using PointEval = std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)>;
double psi(const PointEval& f, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
           const Eigen::MatrixXd& H, double L);

/// A bivariate instance relabeled into the canonical roles of the obtuse
/// configurations: y1 carries the obtuse angle, ell0 = -1.
struct TriangleFrame {
    Eigen::Vector2d y0, y1, y2, y3;
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    double L = 1.0;
};

/// Builds the frame for the given role assignment (original point
/// indices for roles y1, y2, y3).
TriangleFrame make_triangle_frame(const SampleSet& s, const BarycentricData& b,
                                  const std::array<int, 3>& perm);

/// Intersection of line(y1, y3) with line(y0, y2).
Eigen::Vector2d phase3_w(const TriangleFrame& fr, const Tolerances& tol = {});

/// Oblique worst-case Hessian with eigenvector y2 - y0 for +L and
/// y1 - y3 for -L.
HStarMatrix hstar_bivariate(const TriangleFrame& fr, const Tolerances& tol = {});

/// Sharp bound <G, H*>/2 for the obtuse triangle region, witnessed by
/// the piecewise quadratic centered at w. The witness equality is
/// checked before returning.
BoundReport phase3_triangle_bound(const SampleSet& s, const BarycentricData& b,
                                  const std::array<int, 3>& perm,
                                  const Tolerances& tol = {});

/// Sharp bound for the obtuse cone region, obtained by rescaling the
/// triangle-case bound of the transformed instance (samples {y0, y1, y3},
/// evaluation at y2). The witness transfers unchanged and its equality
/// with the reported value is checked before returning.
BoundReport phase3_cone_bound(const SampleSet& s, const BarycentricData& b,
                              const std::array<int, 3>& perm,
                              const Tolerances& tol = {});

/// Classifies the instance and dispatches to the sharpest applicable
/// bound; falls back to the phase-1 bound when no sharp bound is proven.
BoundReport best_bound(const SampleSet& s, const Tolerances& tol = {});

/// best_bound together with the classification that selected it.
struct ClassifiedBound {
    RegionClassification region;
    BoundReport report;
};
ClassifiedBound classify_and_bound(const SampleSet& s, const Tolerances& tol = {});

} // namespace interpbound
