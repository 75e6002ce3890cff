#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "interpbound/sample_set.hpp"

namespace interpbound {

/// An explicit extremal function attaining a sharp bound, with exact
/// gradient.
struct WorstCaseFunction {
    enum class Kind {
        SignedSphere,       // f(u) = sign * (L/2) ||u - center||^2
        QuadraticH,         // f(u) = <H (u - center), u - center> / 2
        PiecewiseQuadratic, // quadratic minus a rank-one correction on one
                            // side of the hyperplane <u - center, direction> = 0
    };

    Kind kind = Kind::SignedSphere;
    double L = 1.0;
    double sign = 1.0;          // SignedSphere only
    Eigen::VectorXd center;
    Eigen::MatrixXd hessian;    // QuadraticH only
    Eigen::VectorXd direction;  // PiecewiseQuadratic only (not normalized)

    std::pair<double, Eigen::VectorXd> eval(const Eigen::VectorXd& u) const;

    static WorstCaseFunction signed_sphere(double L, double sign,
                                           Eigen::VectorXd center);
    static WorstCaseFunction quadratic(double L, Eigen::MatrixXd hessian,
                                       Eigen::VectorXd center);
    static WorstCaseFunction piecewise(double L, Eigen::VectorXd center,
                                       Eigen::VectorXd direction);
};

const char* witness_kind_name(WorstCaseFunction::Kind k);

/// Interpolates the witness on the sample set and returns |m(y0) - f(y0)|.
double achieved_error(const WorstCaseFunction& f, const SampleSet& s,
                      const Tolerances& tol = {});

/// Max of ||grad f(u1) - grad f(u2)|| / ||u1 - u2|| over sampled pairs
/// from a box covering the samples and y0 inflated 3x. Contract: at most
/// L up to round-off.
double lipschitz_certificate(const WorstCaseFunction& f, const SampleSet& s,
                             int trials, std::uint64_t seed);

} // namespace interpbound
