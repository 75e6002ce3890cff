#pragma once

#include <span>

#include <Eigen/Dense>

#include "interpbound/geometry.hpp"
#include "interpbound/sample_set.hpp"

namespace interpbound {

/// The unique linear interpolant of the sample values, stored in the
/// frame centered at y0: m(u) = c + <g, u - y0>, so c = m(y0).
struct LinearModel {
    double c = 0.0;
    Eigen::VectorXd g;
    Eigen::VectorXd y0;

    double operator()(const Eigen::VectorXd& u) const;
};

/// Solves the (n+1) x (n+1) interpolation system. values[i] carries
/// f(points[i]) in the original point order.
LinearModel fit(const SampleSet& s, std::span<const double> values,
                const Tolerances& tol = {});

/// Realized approximation error m(y0) - f(y0).
double error_at_y0(const LinearModel& m, double f_y0);

/// m(y0) through the Lagrange form sum_i ell_i f(y_i); values in original
/// point order. Used to cross-check the fitted form.
double lagrange_m_y0(const BarycentricData& b, std::span<const double> values);

} // namespace interpbound
