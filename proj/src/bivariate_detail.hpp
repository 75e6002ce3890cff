#pragma once

// Internal helpers shared by the classifier and the phase-3 bounds: role
// search for the two bivariate obtuse configurations. A candidate role
// assignment (y1, y2, y3) is scored by the minimum of its normalized
// condition margins; an assignment qualifies when every margin clears
// the sign tolerance.

#include <array>
#include <optional>

#include <Eigen/Dense>

namespace interpbound::detail {

struct BivConfig {
    Eigen::Vector2d eval_point;            // barycentric coefficient -1
    std::array<Eigen::Vector2d, 3> pts;
    std::array<double, 3> l;               // coefficients of pts
    double scale_l = 1.0;                  // max(1, |l|_inf)
    double scale_d = 1.0;                  // 1 + squared diameter

    void finish_scales();
};

// Margin of the triangle-region conditions for roles (y1, y2, y3) =
// (pts[r[0]], pts[r[1]], pts[r[2]]): obtuse angle at y1, l2 > 0, l3 < 0,
// and l1 <y2-y1, y3-y1> - l3 <y2-y3, y1-y3> < 0. Positive iff all hold
// strictly.
double triangle_margin(const BivConfig& c, const std::array<int, 3>& roles);

// Margin of the cone-region conditions: obtuse angle at y1, l1 < 0,
// l2 > 0, l3 > 0 and the expression above > 0. The transformed-instance
// triangle check is applied separately.
double cone_margin(const BivConfig& c, const std::array<int, 3>& roles);

// The reduced instance of the cone case: samples {y0, y1, y3} with
// coefficients -l_i / l2, evaluated at y2.
BivConfig cone_transform(const BivConfig& c, const std::array<int, 3>& roles);

struct RoleMatch {
    std::array<int, 3> roles; // indices into BivConfig::pts
    double margin;            // min margin across conditions
};

// First role assignment (lexicographic order) whose margin is at least
// -tol. For the cone search the transformed instance must also admit a
// triangle assignment; the reported margin includes that check.
std::optional<RoleMatch> find_triangle_roles(const BivConfig& c, double tol,
                                             const std::array<int, 3>* skip = nullptr);
std::optional<RoleMatch> find_cone_roles(const BivConfig& c, double tol,
                                         const std::array<int, 3>* skip = nullptr);

} // namespace interpbound::detail
