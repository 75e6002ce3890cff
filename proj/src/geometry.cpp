#include "interpbound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "interpbound/bounds.hpp"
#include "interpbound/errors.hpp"

#include "bivariate_detail.hpp"

namespace interpbound {

PhiMatrix build_phi(const SampleSet& s, const Tolerances& tol) {
    s.validate();
    const int m = s.n + 1;
    Eigen::MatrixXd phi(m, m);
    for (int i = 0; i < m; ++i) {
        phi(i, 0) = 1.0;
        phi.row(i).tail(s.n) = (s.points[i] - s.y0).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(m - 1);
    double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < tol.cond_limit))
        throw SingularSimplex("sample set is numerically affinely dependent "
                              "(cond(Phi) = " + std::to_string(cond) + ")");
    return {std::move(phi), cond};
}

int BarycentricData::slot_of(int original_index) const {
    for (std::size_t k = 0; k < order.size(); ++k)
        if (order[k] == original_index) return static_cast<int>(k) + 1;
    throw InvalidInput("point index out of range");
}

BarycentricData barycentric(const SampleSet& s, const Tolerances& tolc) {
    PhiMatrix pm = build_phi(s, tolc);
    const int m = s.n + 1;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(0) = 1.0; // phi(0) = e_1
    Eigen::VectorXd l = pm.phi.transpose().partialPivLu().solve(rhs);

    BarycentricData b;
    b.order.resize(m);
    std::iota(b.order.begin(), b.order.end(), 0);
    std::stable_sort(b.order.begin(), b.order.end(),
                     [&](int a, int c) { return l(a) > l(c); });

    b.ell.resize(m + 1);
    b.ell(0) = -1.0;
    for (int k = 0; k < m; ++k) b.ell(k + 1) = l(b.order[k]);

    b.tol = tolc.sign_rel * std::max(1.0, b.ell.cwiseAbs().maxCoeff());
    for (int i = 0; i <= m; ++i) {
        if (b.ell(i) > b.tol) b.i_plus.push_back(i);
        else if (b.ell(i) < -b.tol) b.i_minus.push_back(i);
    }
    return b;
}

const Eigen::VectorXd& point_at(const SampleSet& s, const BarycentricData& b, int i) {
    if (i == 0) return s.y0;
    return s.points[b.order[i - 1]];
}

Eigen::MatrixXd sorted_offsets(const SampleSet& s, const BarycentricData& b) {
    Eigen::MatrixXd Y(s.n + 1, s.n);
    for (int i = 1; i <= s.n + 1; ++i)
        Y.row(i - 1) = (point_at(s, b, i) - s.y0).transpose();
    return Y;
}

MomentSpectrum moment_matrix(const SampleSet& s, const BarycentricData& b,
                             const Tolerances& tolc) {
    MomentSpectrum ms;
    ms.G = Eigen::MatrixXd::Zero(s.n, s.n);
    for (int i = 1; i <= s.n + 1; ++i) {
        Eigen::VectorXd d = point_at(s, b, i) - s.y0;
        ms.G += b.ell(i) * d * d.transpose();
    }
    ms.G = 0.5 * (ms.G + ms.G.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ms.G);
    if (es.info() != Eigen::Success)
        throw SpectrumMismatch("eigendecomposition of G failed");
    const Eigen::VectorXd& vals = es.eigenvalues(); // ascending
    double vmax = vals.cwiseAbs().maxCoeff();
    // The zero band is floored at the spectral mass the sign partition
    // dropped: coordinates inside the ell tolerance contribute at most
    // (n+2) * tol * max dist^2 to any eigenvalue. This keeps the inertia
    // comparison consistent with the ell signs near vertices and facets.
    double dist2 = 0.0;
    for (int i = 1; i <= s.n + 1; ++i)
        dist2 = std::max(dist2, (point_at(s, b, i) - s.y0).squaredNorm());
    double zero_thresh =
        std::max(tolc.eig_zero_rel * vmax, (s.n + 2) * b.tol * dist2);

    std::vector<int> neg, zero, pos;
    for (int i = 0; i < s.n; ++i) {
        if (vals(i) < -zero_thresh) neg.push_back(i);
        else if (vals(i) > zero_thresh) pos.push_back(i);
        else zero.push_back(i);
    }

    int want_pos = b.n_plus() - 1;
    int want_neg = b.n_minus() - 1;
    if (static_cast<int>(pos.size()) != want_pos ||
        static_cast<int>(neg.size()) != want_neg)
        throw SpectrumMismatch(
            "inertia of G (" + std::to_string(pos.size()) + "+, " +
            std::to_string(neg.size()) + "-) disagrees with the sign pattern of "
            "ell (" + std::to_string(want_pos) + "+, " + std::to_string(want_neg) +
            "-); instance is ill-conditioned near a sign change");

    auto take = [&](const std::vector<int>& idx, bool reverse) {
        std::pair<Eigen::VectorXd, Eigen::MatrixXd> out;
        out.first.resize(idx.size());
        out.second.resize(s.n, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            int j = reverse ? idx[idx.size() - 1 - k] : idx[k];
            out.first(k) = vals(j);
            out.second.col(k) = es.eigenvectors().col(j);
        }
        return out;
    };
    // plus: descending value; minus: most negative first.
    std::tie(ms.lambda_plus, ms.P_plus) = take(pos, true);
    std::tie(ms.lambda_minus, ms.P_minus) = take(neg, false);
    Eigen::VectorXd dummy;
    std::tie(dummy, ms.P_zero) = take(zero, false);
    return ms;
}

double recentring_residual(const SampleSet& s, const BarycentricData& b,
                           const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(s.n, s.n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s.n, s.n);
    for (int i = 0; i <= s.n + 1; ++i) {
        const Eigen::VectorXd& y = point_at(s, b, i);
        G += b.ell(i) * (y - s.y0) * (y - s.y0).transpose();
        A += b.ell(i) * (y - u1) * (y - u2).transpose();
    }
    return (A - G).cwiseAbs().maxCoeff();
}

bool is_acute_simplex(const SampleSet& s, const Tolerances& tolc) {
    s.validate();
    double d2 = 0.0;
    for (std::size_t i = 0; i < s.points.size(); ++i)
        for (std::size_t j = i + 1; j < s.points.size(); ++j)
            d2 = std::max(d2, (s.points[i] - s.points[j]).squaredNorm());
    double tol = tolc.sign_rel * (1.0 + d2);
    const int m = s.n + 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < m; ++k) {
                if (k == i) continue;
                if ((s.points[j] - s.points[i]).dot(s.points[k] - s.points[i]) < -tol)
                    return false;
            }
        }
    return true;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::ConvexHull: return "ConvexHull";
        case Region::SinglePositive: return "SinglePositive";
        case Region::MuNonnegative: return "MuNonnegative";
        case Region::ObtuseTriangle: return "ObtuseTriangleRegion";
        case Region::ObtuseCone: return "ObtuseConeRegion";
        case Region::MuNegativeUnresolved: return "MuNegativeUnresolved";
    }
    return "?";
}

namespace {

// One step of the classification walk: the tag it would settle on plus
// the margin of the accepting comparison (normalized; accepted when
// margin >= -tol).
struct WalkResult {
    Region tag;
    std::optional<std::array<int, 3>> perm; // original point indices
    double margin = std::numeric_limits<double>::infinity();
};

enum class Skip { None, Hull, Single, Mu, TrianglePerm, ConePerm };

detail::BivConfig make_biv_config(const SampleSet& s, const BarycentricData& b) {
    detail::BivConfig c;
    c.eval_point = s.y0;
    for (int i = 0; i < 3; ++i) {
        c.pts[i] = point_at(s, b, i + 1);
        c.l[i] = b.ell(i + 1);
    }
    c.finish_scales();
    return c;
}

std::array<int, 3> to_original(const BarycentricData& b, const std::array<int, 3>& roles) {
    // BivConfig::pts[k] is sorted slot k+1.
    return {b.order[roles[0]], b.order[roles[1]], b.order[roles[2]]};
}

// Walks the decision order once. `skip` suppresses the decision that was
// marginal in the primary walk so the alternate candidate emerges.
WalkResult walk(const SampleSet& s, const BarycentricData& b, const MuTable* mu,
                const Tolerances& tolc, Skip skip,
                const std::array<int, 3>* skip_roles) {
    const double tolr = tolc.sign_rel;
    const int m = s.n + 1;
    double scale_l = std::max(1.0, b.ell.cwiseAbs().maxCoeff());

    if (skip != Skip::Hull) {
        double hull_m = b.ell.tail(m).minCoeff() / scale_l;
        if (hull_m >= -tolr) return {Region::ConvexHull, std::nullopt, hull_m};
    }
    if (skip != Skip::Single) {
        double single_m = -b.ell(2) / scale_l; // second largest must be <= 0
        if (single_m >= -tolr) return {Region::SinglePositive, std::nullopt, single_m};
    }
    if (skip != Skip::Mu) {
        if (!mu)
            throw InvalidInput("classification needs the mu table once the "
                               "coordinate signs do not settle it");
        double scale_mu = std::max(1.0, mu->mu.size() > 0 ? mu->mu.cwiseAbs().maxCoeff() : 0.0);
        double mu_m = mu->min_entry / scale_mu;
        if (mu_m >= -tolr) return {Region::MuNonnegative, std::nullopt, mu_m};
    }
    if (s.n == 2) {
        detail::BivConfig c = make_biv_config(s, b);
        auto tri = detail::find_triangle_roles(
            c, tolr, skip == Skip::TrianglePerm ? skip_roles : nullptr);
        if (tri)
            return {Region::ObtuseTriangle, to_original(b, tri->roles), tri->margin};
        auto cone = detail::find_cone_roles(
            c, tolr, skip == Skip::ConePerm ? skip_roles : nullptr);
        if (cone)
            return {Region::ObtuseCone, to_original(b, cone->roles), cone->margin};
    }
    return {Region::MuNegativeUnresolved, std::nullopt,
            std::numeric_limits<double>::infinity()};
}

Skip skip_for(const WalkResult& r) {
    switch (r.tag) {
        case Region::ConvexHull: return Skip::Hull;
        case Region::SinglePositive: return Skip::Single;
        case Region::MuNonnegative: return Skip::Mu;
        case Region::ObtuseTriangle: return Skip::TrianglePerm;
        case Region::ObtuseCone: return Skip::ConePerm;
        default: return Skip::None;
    }
}

} // namespace

RegionClassification classify(const SampleSet& s, const BarycentricData& b,
                              const MuTable* mu, const Tolerances& tolc) {
    RegionClassification out;
    if (mu) out.mu_min = mu->min_entry;

    WalkResult primary = walk(s, b, mu, tolc, Skip::None, nullptr);
    out.tag = primary.tag;
    out.perm = primary.perm;

    if (primary.margin <= tolc.sign_rel) {
        // The accepting comparison was within tolerance of zero: y0 sits
        // on a region boundary. Re-walk with that decision suppressed to
        // surface the neighbouring candidate.
        out.boundary = true;
        std::array<int, 3> roles{};
        const std::array<int, 3>* skip_roles = nullptr;
        if (primary.perm) {
            // Convert back to sorted slots for the skip comparison.
            for (int k = 0; k < 3; ++k)
                roles[k] = b.slot_of((*primary.perm)[k]) - 1;
            skip_roles = &roles;
        }
        try {
            WalkResult alt = walk(s, b, mu, tolc, skip_for(primary), skip_roles);
            if (alt.tag != primary.tag || alt.perm != primary.perm) {
                out.alternate = alt.tag;
                out.alternate_perm = alt.perm;
            }
        } catch (const InvalidInput&) {
            // No mu table supplied; the alternate stays unknown.
        }
    }
    return out;
}

} // namespace interpbound
