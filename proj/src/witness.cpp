#include "interpbound/witness.hpp"

#include <cmath>
#include <vector>

#include "interpbound/errors.hpp"
#include "interpbound/model.hpp"
#include "interpbound/rng.hpp"

namespace interpbound {

std::pair<double, Eigen::VectorXd> WorstCaseFunction::eval(const Eigen::VectorXd& u) const {
    Eigen::VectorXd d = u - center;
    switch (kind) {
        case Kind::SignedSphere:
            return {sign * 0.5 * L * d.squaredNorm(), sign * L * d};
        case Kind::QuadraticH: {
            Eigen::VectorXd hd = hessian * d;
            // For an asymmetric H the quadratic form only sees sym(H).
            Eigen::VectorXd grad = 0.5 * (hd + hessian.transpose() * d);
            return {0.5 * d.dot(hd), grad};
        }
        case Kind::PiecewiseQuadratic: {
            double base = 0.5 * L * d.squaredNorm();
            Eigen::VectorXd grad = L * d;
            if (d.dot(direction) < 0.0) {
                Eigen::VectorXd dhat = direction.normalized();
                double t = dhat.dot(d);
                base -= L * t * t;
                grad -= 2.0 * L * t * dhat;
            }
            return {base, grad};
        }
    }
    throw Error("unreachable witness kind");
}

WorstCaseFunction WorstCaseFunction::signed_sphere(double L, double sign,
                                                   Eigen::VectorXd center) {
    WorstCaseFunction f;
    f.kind = Kind::SignedSphere;
    f.L = L;
    f.sign = sign;
    f.center = std::move(center);
    return f;
}

WorstCaseFunction WorstCaseFunction::quadratic(double L, Eigen::MatrixXd hessian,
                                               Eigen::VectorXd center) {
    WorstCaseFunction f;
    f.kind = Kind::QuadraticH;
    f.L = L;
    f.hessian = std::move(hessian);
    f.center = std::move(center);
    return f;
}

WorstCaseFunction WorstCaseFunction::piecewise(double L, Eigen::VectorXd center,
                                               Eigen::VectorXd direction) {
    WorstCaseFunction f;
    f.kind = Kind::PiecewiseQuadratic;
    f.L = L;
    f.center = std::move(center);
    f.direction = std::move(direction);
    return f;
}

const char* witness_kind_name(WorstCaseFunction::Kind k) {
    switch (k) {
        case WorstCaseFunction::Kind::SignedSphere: return "SignedSphere";
        case WorstCaseFunction::Kind::QuadraticH: return "QuadraticH";
        case WorstCaseFunction::Kind::PiecewiseQuadratic: return "PiecewiseQuadratic";
    }
    return "?";
}

double achieved_error(const WorstCaseFunction& f, const SampleSet& s,
                      const Tolerances& tol) {
    std::vector<double> values(s.n + 1);
    for (int i = 0; i <= s.n; ++i) values[i] = f.eval(s.points[i]).first;
    LinearModel m = fit(s, values, tol);
    return std::abs(error_at_y0(m, f.eval(s.y0).first));
}

double lipschitz_certificate(const WorstCaseFunction& f, const SampleSet& s,
                             int trials, std::uint64_t seed) {
    Eigen::VectorXd lo = s.y0, hi = s.y0;
    for (const auto& p : s.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Eigen::VectorXd mid = 0.5 * (lo + hi);
    Eigen::VectorXd half = 1.5 * (hi - lo).cwiseMax(1e-6);
    CounterRng rng(seed, 0x11b5c3);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd u1(s.n), u2(s.n);
        for (int i = 0; i < s.n; ++i) {
            u1(i) = mid(i) + half(i) * (2.0 * rng.uniform() - 1.0);
            u2(i) = mid(i) + half(i) * (2.0 * rng.uniform() - 1.0);
        }
        double dist = (u1 - u2).norm();
        if (dist < 1e-12) continue;
        double ratio = (f.eval(u1).second - f.eval(u2).second).norm() / dist;
        worst = std::max(worst, ratio);
    }
    return worst;
}

} // namespace interpbound
