#pragma once

// Instance generators shared by the unit and acceptance suites. All
// randomness flows through CounterRng so every test is reproducible.

#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "interpbound/bounds.hpp"
#include "interpbound/geometry.hpp"
#include "interpbound/rng.hpp"
#include "interpbound/sample_set.hpp"

namespace testsupport {

using namespace interpbound;

/// Well-conditioned random simplex with points in [-2, 2]^n and a random
/// Lipschitz constant in [0.5, 4].
inline SampleSet random_simplex(int n, CounterRng& rng) {
    SampleSet s;
    s.n = n;
    while (true) {
        s.points.clear();
        for (int i = 0; i <= n; ++i) s.points.push_back(rng.uniform_vector(n, -2.0, 2.0));
        Eigen::MatrixXd E(n, n);
        for (int i = 1; i <= n; ++i) E.col(i - 1) = s.points[i] - s.points[0];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
        double smin = svd.singularValues()(n - 1);
        double smax = svd.singularValues()(0);
        if (smin > 0.25 * smax && smax > 0.3) break;
    }
    s.L = rng.uniform(0.5, 4.0);
    s.y0 = Eigen::VectorXd::Zero(n);
    return s;
}

/// y0 uniform over the convex hull (flat Dirichlet weights).
inline void place_in_hull(SampleSet& s, CounterRng& rng) {
    Eigen::VectorXd w(s.n + 1);
    for (int i = 0; i <= s.n; ++i) w(i) = -std::log(1.0 - rng.uniform());
    w /= w.sum();
    s.y0 = Eigen::VectorXd::Zero(s.n);
    for (int i = 0; i <= s.n; ++i) s.y0 += w(i) * s.points[i];
}

/// y0 strictly inside the cone of vertex `v` where ell_v is the only
/// positive coordinate.
inline void place_in_vertex_cone(SampleSet& s, int v, CounterRng& rng) {
    s.y0 = s.points[v];
    for (int j = 0; j <= s.n; ++j) {
        if (j == v) continue;
        s.y0 += rng.uniform(0.05, 1.2) * (s.points[v] - s.points[j]);
    }
}

/// y0 anywhere around the simplex, interpolation and extrapolation alike.
inline void place_anywhere(SampleSet& s, CounterRng& rng) {
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(s.n);
    for (const auto& p : s.points) centroid += p;
    centroid /= s.points.size();
    double r = rng.uniform(0.0, 2.5) * s.diameter();
    s.y0 = centroid + r * rng.unit_vector(s.n);
}

/// Keeps instances away from sign-change boundaries so the inertia and
/// mu identities are clean.
inline bool well_separated(const SampleSet& s, double floor = 1e-5) {
    BarycentricData b = barycentric(s);
    double scale = std::max(1.0, b.ell.cwiseAbs().maxCoeff());
    for (int i = 1; i <= s.n + 1; ++i)
        if (std::abs(b.ell(i)) < floor * scale) return false;
    return true;
}

/// The reference obtuse template used throughout: obtuse angle at the
/// first vertex.
inline SampleSet obtuse_template() {
    SampleSet s;
    s.n = 2;
    s.points = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0),
                Eigen::Vector2d(-2.0, 0.0)};
    s.y0 = Eigen::Vector2d(0.8, 0.4);
    s.L = 2.0;
    return s;
}

inline SampleSet acute_template() {
    SampleSet s;
    s.n = 2;
    s.points = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
                Eigen::Vector2d(0.5, 0.8)};
    s.y0 = Eigen::Vector2d(0.5, 0.3);
    s.L = 2.0;
    return s;
}

/// Random triangle with exactly one clearly obtuse vertex. Returns the
/// obtuse vertex index.
inline int random_obtuse_triangle(SampleSet& s, CounterRng& rng) {
    s.n = 2;
    s.L = rng.uniform(0.5, 4.0);
    while (true) {
        s.points.clear();
        for (int i = 0; i < 3; ++i) s.points.push_back(rng.uniform_vector(2, -2.0, 2.0));
        double scale = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                scale = std::max(scale, (s.points[i] - s.points[j]).squaredNorm());
        if (scale < 0.5) continue;
        int obtuse = -1;
        bool degenerate = false;
        for (int i = 0; i < 3 && !degenerate; ++i) {
            double d = (s.points[(i + 1) % 3] - s.points[i])
                           .dot(s.points[(i + 2) % 3] - s.points[i]);
            if (d < -0.05 * scale) {
                if (obtuse >= 0) degenerate = true; // cannot happen, but guard
                obtuse = i;
            } else if (d < 0.05 * scale) {
                degenerate = true; // too close to right-angled
            }
        }
        Eigen::Matrix2d E;
        E.col(0) = s.points[1] - s.points[0];
        E.col(1) = s.points[2] - s.points[0];
        if (degenerate || obtuse < 0) continue;
        if (std::abs(E.determinant()) < 0.1 * scale) continue;
        s.y0 = Eigen::Vector2d::Zero();
        return obtuse;
    }
}

/// Foot of the perpendicular from p onto the line through a and b.
inline Eigen::Vector2d foot_on_line(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                    const Eigen::Vector2d& b) {
    Eigen::Vector2d e = (b - a).normalized();
    return a + e.dot(p - a) * e;
}

/// Place y0 inside the shaded triangle attached to the edge
/// (obtuse vertex, pos) of an obtuse triangle; neg is the third vertex.
/// The region is the open triangle (y1, y2, foot(y2 -> line(y1, y3))).
inline void place_in_triangle_region(SampleSet& s, int obtuse, int pos, int neg,
                                     CounterRng& rng) {
    const Eigen::Vector2d& y1 = s.points[obtuse];
    const Eigen::Vector2d& y2 = s.points[pos];
    Eigen::Vector2d t = foot_on_line(y2, y1, s.points[neg]);
    Eigen::Vector3d w;
    for (int i = 0; i < 3; ++i) w(i) = rng.uniform(0.08, 1.0);
    w /= w.sum();
    s.y0 = w(0) * y1 + w(1) * y2 + w(2) * t;
}

/// Random acute simplex: a regular simplex, randomly perturbed, rotated,
/// scaled and shifted, redrawn until every vertex angle is non-obtuse.
inline SampleSet random_acute_simplex(int n, CounterRng& rng) {
    SampleSet s;
    s.n = n;
    s.L = rng.uniform(0.5, 4.0);
    while (true) {
        s.points.clear();
        for (int i = 0; i < n; ++i) s.points.push_back(Eigen::VectorXd::Unit(n, i));
        double c = (1.0 - std::sqrt(n + 1.0)) / n;
        s.points.push_back(Eigen::VectorXd::Constant(n, c));
        for (auto& p : s.points) p += 0.12 * rng.uniform_vector(n, -1.0, 1.0);
        Eigen::MatrixXd Q = rng.orthogonal(n);
        double scale = rng.uniform(0.5, 2.0);
        Eigen::VectorXd shift = rng.uniform_vector(n, -2.0, 2.0);
        for (auto& p : s.points) p = (scale * Q * p + shift).eval();
        s.y0 = shift;
        if (is_acute_simplex(s)) return s;
    }
}

/// Brute-force maximum achieved error over the whole piecewise-quadratic
/// family on a bivariate instance. The error depends on the direction
/// angle and on the center's offset along the direction only, so a
/// nested grid search over those two parameters suffices.
inline double max_piecewise_error(const SampleSet& s) {
    PhiMatrix pm = build_phi(s);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(pm.phi);
    auto error_at = [&](double theta, double t) {
        Eigen::Vector2d d(std::cos(theta), std::sin(theta));
        WorstCaseFunction f = WorstCaseFunction::piecewise(s.L, t * d, d);
        Eigen::VectorXd rhs(3);
        for (int i = 0; i < 3; ++i) rhs(i) = f.eval(s.points[i]).first;
        return std::abs(lu.solve(rhs)(0) - f.eval(s.y0).first);
    };
    double radius = s.y0.norm();
    for (const auto& p : s.points) radius = std::max(radius, p.norm());
    double best = 0.0, best_theta = 0.0, best_t = 0.0;
    double half_theta = 3.15, half_t = 1.5 * radius + 0.5;
    double c_theta = 0.0, c_t = 0.0;
    for (int round = 0; round < 6; ++round) {
        const int mth = round == 0 ? 256 : 33;
        const int mt = round == 0 ? 129 : 33;
        for (int i = 0; i < mth; ++i) {
            double theta = c_theta - half_theta + 2.0 * half_theta * i / (mth - 1);
            for (int j = 0; j < mt; ++j) {
                double t = c_t - half_t + 2.0 * half_t * j / (mt - 1);
                double e = error_at(theta, t);
                if (e > best) {
                    best = e;
                    best_theta = theta;
                    best_t = t;
                }
            }
        }
        c_theta = best_theta;
        c_t = best_t;
        half_theta /= round == 0 ? 64.0 : 8.0;
        half_t /= round == 0 ? 32.0 : 8.0;
    }
    return best;
}

/// Place y0 inside the shaded cone at vertex `pos`, bounded by the
/// perpendicular through pos to line(obtuse, neg) and by the extension
/// of the edge from the obtuse vertex through pos.
inline void place_in_cone_region(SampleSet& s, int obtuse, int pos, int neg,
                                 CounterRng& rng) {
    const Eigen::Vector2d& y1 = s.points[obtuse];
    const Eigen::Vector2d& y2 = s.points[pos];
    Eigen::Vector2d t = foot_on_line(y2, y1, s.points[neg]);
    Eigen::Vector2d up = (y2 - t).normalized();
    Eigen::Vector2d out = (y2 - y1).normalized();
    double scale = s.diameter();
    s.y0 = y2 + rng.uniform(0.05, 1.0) * scale * up + rng.uniform(0.05, 1.0) * scale * out;
}

} // namespace testsupport
