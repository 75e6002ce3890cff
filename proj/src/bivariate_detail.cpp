#include "bivariate_detail.hpp"

#include <algorithm>
#include <cmath>

namespace interpbound::detail {

namespace {

const std::array<std::array<int, 3>, 6> kRolePerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

struct Conditions {
    double obtuse;  // -<y2-y1, y3-y1>, normalized
    double l1, l2, l3;
    double expr;    // l1 <y2-y1, y3-y1> - l3 <y2-y3, y1-y3>, normalized
};

Conditions evaluate(const BivConfig& c, const std::array<int, 3>& roles) {
    const Eigen::Vector2d& y1 = c.pts[roles[0]];
    const Eigen::Vector2d& y2 = c.pts[roles[1]];
    const Eigen::Vector2d& y3 = c.pts[roles[2]];
    Conditions out;
    double dot1 = (y2 - y1).dot(y3 - y1);
    double dot3 = (y2 - y3).dot(y1 - y3);
    out.obtuse = -dot1 / c.scale_d;
    out.l1 = c.l[roles[0]];
    out.l2 = c.l[roles[1]];
    out.l3 = c.l[roles[2]];
    out.expr = (out.l1 * dot1 - out.l3 * dot3) / (c.scale_l * c.scale_d);
    return out;
}

} // namespace

void BivConfig::finish_scales() {
    scale_l = 1.0;
    for (double v : l) scale_l = std::max(scale_l, std::abs(v));
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        d2 = std::max(d2, (pts[i] - eval_point).squaredNorm());
        for (int j = i + 1; j < 3; ++j)
            d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
    }
    scale_d = 1.0 + d2;
}

double triangle_margin(const BivConfig& c, const std::array<int, 3>& roles) {
    Conditions v = evaluate(c, roles);
    return std::min({v.obtuse, v.l2 / c.scale_l, -v.l3 / c.scale_l, -v.expr});
}

double cone_margin(const BivConfig& c, const std::array<int, 3>& roles) {
    Conditions v = evaluate(c, roles);
    return std::min({v.obtuse, -v.l1 / c.scale_l, v.l2 / c.scale_l,
                     v.l3 / c.scale_l, v.expr});
}

BivConfig cone_transform(const BivConfig& c, const std::array<int, 3>& roles) {
    double l2 = c.l[roles[1]];
    BivConfig t;
    t.eval_point = c.pts[roles[1]];
    t.pts = {c.eval_point, c.pts[roles[0]], c.pts[roles[2]]};
    t.l = {1.0 / l2, -c.l[roles[0]] / l2, -c.l[roles[2]] / l2};
    t.finish_scales();
    return t;
}

std::optional<RoleMatch> find_triangle_roles(const BivConfig& c, double tol,
                                             const std::array<int, 3>* skip) {
    for (const auto& roles : kRolePerms) {
        if (skip && roles == *skip) continue;
        double m = triangle_margin(c, roles);
        if (m >= -tol) return RoleMatch{roles, m};
    }
    return std::nullopt;
}

std::optional<RoleMatch> find_cone_roles(const BivConfig& c, double tol,
                                         const std::array<int, 3>* skip) {
    for (const auto& roles : kRolePerms) {
        if (skip && roles == *skip) continue;
        double m = cone_margin(c, roles);
        if (m < -tol) continue;
        // The reduction is only usable if the transformed instance is a
        // genuine triangle-region configuration.
        auto tri = find_triangle_roles(cone_transform(c, roles), tol);
        if (!tri) continue;
        return RoleMatch{roles, std::min(m, tri->margin)};
    }
    return std::nullopt;
}

} // namespace interpbound::detail
