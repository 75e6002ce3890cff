#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "interpbound/bounds.hpp"
#include "interpbound/geometry.hpp"
#include "interpbound/sample_set.hpp"

namespace interpbound {

/// A randomized family of functions with L-Lipschitz gradient, used to
/// empirically maximize the interpolation error. Member k of a family is
/// a pure function of (seed, k), so runs are reproducible and can be
/// fanned out by index.
struct FunctionFamily {
    enum class Kind {
        ClampedQuadratic, // random symmetric Hessian, spectrum clamped to [-L, L]
        RotatedPiecewise, // piecewise quadratic with random center and direction
        Huberized,        // quadratic plus a Huber ridge; curvature gap <= 2L
    };
    Kind kind = Kind::ClampedQuadratic;
    std::uint64_t seed = 0;
    int count = 0;
};

const char* family_kind_name(FunctionFamily::Kind k);

/// One sampled member, evaluatable with exact gradient.
struct SampledFunction {
    enum class Kind { Quadratic, Piecewise, Huber };
    Kind kind = Kind::Quadratic;
    double L = 1.0;
    Eigen::VectorXd center;
    Eigen::MatrixXd hessian;   // Quadratic
    Eigen::VectorXd linear;    // Quadratic
    Eigen::VectorXd direction; // Piecewise / Huber, unit length
    double kappa = 0.0;        // Huber ridge weight
    double delta = 0.0;        // Huber band half-width

    std::pair<double, Eigen::VectorXd> eval(const Eigen::VectorXd& u) const;
};

/// Axis-aligned box covering the samples and y0, inflated 3x about its
/// center. All family sampling happens inside it.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sampling_box(const SampleSet& s);

SampledFunction sample_member(const SampleSet& s, const FunctionFamily& fam, int index);

struct EmpiricalMax {
    double max_error = 0.0;
    int argmax = -1; // index into extra members (negative: -1-k) or the family
};

/// Max |m(y0) - f(y0)| over the family members plus any extra candidates
/// supplied by the caller (extras are evaluated first and indexed
/// -1, -2, ...). Nondecreasing in count for a fixed seed.
EmpiricalMax empirical_max_error(const SampleSet& s, const FunctionFamily& fam,
                                 std::span<const SampledFunction> extra = {},
                                 const Tolerances& tol = {});

/// Slack of the averaged-gradient inequality: right side minus left
/// side. Nonnegative (up to round-off) for every member of the class.
double check_lipschitz_stronger(const PointEval& f, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& u2, double L);

/// Slack of the descent lemma: (L/2)||u2 - u1||^2 minus the absolute
/// first-order Taylor residual. Nonnegative for every member.
double check_descent_lemma(const PointEval& f, const Eigen::VectorXd& u1,
                           const Eigen::VectorXd& u2, double L);

struct GridSpec {
    double xmin = -1.0, xmax = 1.0;
    double ymin = -1.0, ymax = 1.0;
    int resolution = 100; // points per axis
};

struct RegionMapCell {
    double x = 0.0, y = 0.0;
    Region tag = Region::ConvexHull;
    double bound = 0.0;
    double mu_min = 0.0;
    bool sharp = false;
    bool boundary = false;
    bool failed = false; // degenerate geometry at this grid point
};

struct RegionMap {
    GridSpec grid;
    std::vector<RegionMapCell> cells; // row-major, y outer, x inner
};

/// Classifies and bounds a grid of evaluation points sharing the
/// template's sample points. Degenerate grid points are marked, not
/// fatal. Bivariate templates only.
RegionMap sweep_region_map(const SampleSet& tmpl, const GridSpec& grid,
                           const Tolerances& tol = {});

/// Number of 4-connected components of cells with mu_min < -tol.
int count_negative_mu_components(const RegionMap& map, double tol = 0.0);

/// One entry of the verification report. margin >= 0 means the check
/// passed; its magnitude is the distance to the failure threshold.
struct VerifyCheck {
    std::string name;
    double margin = 0.0;
    int samples = 0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    double worst_slack = 0.0; // min margin across checks
    bool pass = false;
};

/// Runs every numerical check the library promises on one instance:
/// coordinate identities, mu identities, the two gradient inequalities,
/// psi nonpositivity, Lipschitz certificates of the sampled families,
/// witness equality for proven-sharp bounds, and empirical soundness of
/// the reported bound. Deterministic in (samples, seed).
VerifyReport verify_instance(const SampleSet& s, int samples, std::uint64_t seed,
                             const Tolerances& tol = {});

} // namespace interpbound
