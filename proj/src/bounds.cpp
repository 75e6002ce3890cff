#include "interpbound/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "interpbound/errors.hpp"
#include "interpbound/model.hpp"

#include "bivariate_detail.hpp"

namespace interpbound {

namespace {

double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.cwiseProduct(b).sum();
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Phase1: return "Phase1";
        case Method::Waldron: return "Waldron";
        case Method::Phase2: return "Phase2";
        case Method::Phase3Triangle: return "Phase3Triangle";
        case Method::Phase3Cone: return "Phase3Cone";
    }
    return "?";
}

double phase1_bound_at(const SampleSet& s, const BarycentricData& b,
                       const Eigen::VectorXd& u) {
    double acc = 0.0;
    for (int i = 0; i <= s.n + 1; ++i)
        acc += std::abs(b.ell(i)) * (point_at(s, b, i) - u).squaredNorm();
    return 0.5 * s.L * acc;
}

Eigen::VectorXd phase1_minimizer(const SampleSet& s, const BarycentricData& b) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(s.n);
    double den = 0.0;
    for (int i = 0; i <= s.n + 1; ++i) {
        double a = std::abs(b.ell(i));
        num += a * point_at(s, b, i);
        den += a;
    }
    return num / den;
}

BoundReport phase1_bound(const SampleSet& s, const BarycentricData& b) {
    Eigen::VectorXd w = phase1_minimizer(s, b);
    BoundReport rep;
    rep.value = phase1_bound_at(s, b, w);
    rep.phase1_value = rep.value;
    bool hull = b.n_minus() == 1; // only index 0 is negative
    bool single = b.n_plus() == 1;
    rep.method = hull ? Method::Waldron : Method::Phase1;
    if (hull) {
        rep.sharp = Sharpness::ProvenSharp;
        rep.witness = WorstCaseFunction::signed_sphere(s.L, +1.0, w);
    } else if (single) {
        rep.sharp = Sharpness::ProvenSharp;
        rep.witness = WorstCaseFunction::signed_sphere(s.L, -1.0, w);
    } else {
        rep.sharp = Sharpness::ValidNotProvenSharp;
    }
    return rep;
}

double waldron_bound(const SampleSet& s, const BarycentricData& b) {
    double acc = 0.0;
    for (int i = 1; i <= s.n + 1; ++i)
        acc += b.ell(i) * (point_at(s, b, i) - s.y0).squaredNorm();
    return 0.5 * s.L * acc;
}

HStarMatrix hstar_spectral(const MomentSpectrum& ms, double L) {
    const int n = ms.G.rows();
    HStarMatrix h;
    h.kind = HStarMatrix::Kind::SymmetricSpectral;
    h.H = Eigen::MatrixXd::Zero(n, n);
    if (ms.P_plus.cols() > 0) h.H += L * ms.P_plus * ms.P_plus.transpose();
    if (ms.P_minus.cols() > 0) h.H -= L * ms.P_minus * ms.P_minus.transpose();
    return h;
}

MuTable mu_table(const SampleSet& s, const BarycentricData& b,
                 const MomentSpectrum& ms, const Tolerances& tolc) {
    const int p = b.n_plus();
    const int q = b.n_minus();
    MuTable t;
    t.rows = b.i_plus;
    t.cols = b.i_minus;
    t.mu.resize(p, q);

    Eigen::VectorXd lp(p);
    for (int i = 0; i < p; ++i) lp(i) = b.ell(b.i_plus[i]);

    if (q == 1) {
        // Convex hull: no matrix to invert, mu_{i0} = ell_i.
        t.mu.col(0) = lp;
    } else {
        Eigen::MatrixXd Yp(p, s.n), Ym(q - 1, s.n);
        for (int i = 0; i < p; ++i)
            Yp.row(i) = (point_at(s, b, b.i_plus[i]) - s.y0).transpose();
        for (int j = 1; j < q; ++j)
            Ym.row(j - 1) = (point_at(s, b, b.i_minus[j]) - s.y0).transpose();

        Eigen::MatrixXd YmPm = Ym * ms.P_minus; // (q-1) x (q-1)
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(YmPm, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(q - 2);
        t.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        t.reliable = t.cond < tolc.cond_limit;

        Eigen::MatrixXd M = lp.asDiagonal() * (Yp * ms.P_minus) *
                            YmPm.partialPivLu().inverse();
        t.mu.col(0) = lp - M.rowwise().sum();
        t.mu.rightCols(q - 1) = M;
    }
    t.min_entry = t.mu.minCoeff();

    // Residuals of the defining identities, for diagnostics and tests.
    double r_row = 0.0, r_col = 0.0;
    for (int i = 0; i < p; ++i)
        r_row = std::max(r_row, std::abs(t.mu.row(i).sum() - lp(i)));
    for (int j = 0; j < q; ++j) {
        double col = t.mu.col(j).sum();
        r_col = std::max(r_col, std::abs(col + b.ell(b.i_minus[j])));
    }
    t.residual_row_sums = r_row;
    t.residual_col_sums = r_col;

    HStarMatrix hs = hstar_spectral(ms, s.L);
    Eigen::MatrixXd lo = s.L * Eigen::MatrixXd::Identity(s.n, s.n) - hs.H;
    Eigen::MatrixXd hi = s.L * Eigen::MatrixXd::Identity(s.n, s.n) + hs.H;
    double r_plus = 0.0, r_minus = 0.0;
    for (int i = 0; i < p; ++i) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(s.n);
        for (int j = 0; j < q; ++j)
            acc += t.mu(i, j) * (point_at(s, b, t.cols[j]) - s.y0);
        acc -= lp(i) * (point_at(s, b, t.rows[i]) - s.y0);
        r_plus = std::max(r_plus, (lo * acc).norm());
    }
    for (int j = 0; j < q; ++j) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(s.n);
        for (int i = 0; i < p; ++i)
            acc += t.mu(i, j) * (point_at(s, b, t.rows[i]) - s.y0);
        acc += b.ell(t.cols[j]) * (point_at(s, b, t.cols[j]) - s.y0);
        r_minus = std::max(r_minus, (hi * acc).norm());
    }
    t.residual_proj_plus = r_plus;
    t.residual_proj_minus = r_minus;
    return t;
}

namespace {

BoundReport phase2_from(const SampleSet& s, const BarycentricData& b,
                        const MomentSpectrum& ms, const MuTable& mu,
                        const Tolerances& tolc) {
    HStarMatrix hs = hstar_spectral(ms, s.L);
    double via_inner = 0.5 * inner(ms.G, hs.H);
    double via_spectrum =
        0.5 * s.L * (ms.lambda_plus.sum() - ms.lambda_minus.sum());
    if (std::abs(via_inner - via_spectrum) > 1e-8 * std::max(1.0, std::abs(via_spectrum)))
        throw Error("phase-2 value disagrees between <G,H*>/2 and the "
                    "eigenvalue sum; spectrum is inconsistent");

    BoundReport rep;
    rep.value = via_spectrum;
    rep.method = Method::Phase2;
    rep.phase1_value = phase1_bound_at(s, b, phase1_minimizer(s, b));
    rep.phase2_value = via_spectrum;
    rep.certificate = mu;
    rep.mu_min = mu.min_entry;

    double mu_scale = std::max(1.0, mu.mu.size() > 0 ? mu.mu.cwiseAbs().maxCoeff() : 0.0);
    bool nonneg = mu.min_entry >= -tolc.sign_rel * mu_scale;
    if (nonneg && mu.reliable) {
        rep.sharp = Sharpness::ProvenSharp;
        rep.witness = WorstCaseFunction::quadratic(s.L, hs.H, s.y0);
    } else {
        rep.sharp = Sharpness::ValidNotProvenSharp;
        rep.quadratics_only = !nonneg;
    }
    return rep;
}

} // namespace

BoundReport phase2_bound(const SampleSet& s, const BarycentricData& b,
                         const MomentSpectrum& ms, const Tolerances& tolc) {
    MuTable mu = mu_table(s, b, ms, tolc);
    return phase2_from(s, b, ms, mu, tolc);
}

double psi(const PointEval& f, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
           const Eigen::MatrixXd& H, double L) {
    auto [f1, g1] = f(u1);
    auto [f2, g2] = f(u2);
    Eigen::VectorXd d = u1 - u2;
    Eigen::VectorXd hd = H * d;
    return f1 - f2 - (L * d - hd).dot(g1) / (2.0 * L) - (L * d + hd).dot(g2) / (2.0 * L) -
           hd.squaredNorm() / (4.0 * L) - 0.25 * L * d.squaredNorm();
}

TriangleFrame make_triangle_frame(const SampleSet& s, const BarycentricData& b,
                                  const std::array<int, 3>& perm) {
    if (s.n != 2) throw InvalidInput("triangle frame requires n = 2");
    TriangleFrame fr;
    fr.y0 = s.y0;
    fr.y1 = s.points[perm[0]];
    fr.y2 = s.points[perm[1]];
    fr.y3 = s.points[perm[2]];
    fr.l1 = b.ell(b.slot_of(perm[0]));
    fr.l2 = b.ell(b.slot_of(perm[1]));
    fr.l3 = b.ell(b.slot_of(perm[2]));
    fr.L = s.L;
    return fr;
}

Eigen::Vector2d phase3_w(const TriangleFrame& fr, const Tolerances& tolc) {
    double scale = std::max({1.0, std::abs(fr.l1), std::abs(fr.l2), std::abs(fr.l3)});
    if (std::abs(fr.l1 + fr.l3) <= tolc.sign_rel * scale)
        throw DegenerateIntersection("l1 + l3 vanishes; the lines through "
                                     "(y1, y3) and (y0, y2) are parallel");
    // l0 = -1, so the denominator is -l0 + l1 - l2 + l3 = 2 (l1 + l3).
    Eigen::Vector2d num = fr.y0 + fr.l1 * fr.y1 - fr.l2 * fr.y2 + fr.l3 * fr.y3;
    return num / (1.0 + fr.l1 - fr.l2 + fr.l3);
}

HStarMatrix hstar_bivariate(const TriangleFrame& fr, const Tolerances& tolc) {
    Eigen::Matrix2d P;
    P.col(0) = fr.y2 - fr.y0;
    P.col(1) = fr.y1 - fr.y3;
    double det = P.determinant();
    if (std::abs(det) <= tolc.sign_rel * P.col(0).norm() * P.col(1).norm())
        throw DegenerateDirections("prescribed eigendirections y2 - y0 and "
                                   "y1 - y3 are numerically parallel");
    Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
    D(0, 0) = fr.L;
    D(1, 1) = -fr.L;
    HStarMatrix h;
    h.kind = HStarMatrix::Kind::BivariateOblique;
    h.H = P * D * P.inverse();
    return h;
}

namespace {

struct Phase3Core {
    double value;
    Eigen::Vector2d w;
    HStarMatrix hstar;
    WorstCaseFunction witness;
};

Eigen::Matrix2d frame_moment(const TriangleFrame& fr) {
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    auto add = [&](double l, const Eigen::Vector2d& y) {
        Eigen::Vector2d d = y - fr.y0;
        G += l * d * d.transpose();
    };
    add(fr.l1, fr.y1);
    add(fr.l2, fr.y2);
    add(fr.l3, fr.y3);
    return G;
}

Phase3Core phase3_core(const TriangleFrame& fr, const Tolerances& tolc) {
    Phase3Core out{0.0, phase3_w(fr, tolc), hstar_bivariate(fr, tolc),
                   WorstCaseFunction{}};
    out.value = 0.5 * inner(frame_moment(fr), out.hstar.H);
    out.witness = WorstCaseFunction::piecewise(fr.L, out.w, fr.y1 - fr.y3);
    return out;
}

void check_witness_equality(const char* what, const WorstCaseFunction& f,
                            const SampleSet& s, double value,
                            const Tolerances& tolc) {
    double achieved = achieved_error(f, s, tolc);
    if (std::abs(achieved - value) > 1e-8 * (1.0 + std::abs(value)))
        throw Error(std::string(what) +
                    ": witness achieves " + std::to_string(achieved) +
                    " but the bound is " + std::to_string(value));
}

detail::BivConfig config_of_frame(const TriangleFrame& fr) {
    detail::BivConfig c;
    c.eval_point = fr.y0;
    c.pts = {fr.y1, fr.y2, fr.y3};
    c.l = {fr.l1, fr.l2, fr.l3};
    c.finish_scales();
    return c;
}

} // namespace

BoundReport phase3_triangle_bound(const SampleSet& s, const BarycentricData& b,
                                  const std::array<int, 3>& perm,
                                  const Tolerances& tolc) {
    TriangleFrame fr = make_triangle_frame(s, b, perm);
    Phase3Core core = phase3_core(fr, tolc);
    check_witness_equality("phase-3 triangle bound", core.witness, s, core.value, tolc);

    BoundReport rep;
    rep.value = core.value;
    rep.method = Method::Phase3Triangle;
    rep.sharp = Sharpness::ProvenSharp;
    rep.witness = core.witness;
    rep.phase1_value = phase1_bound_at(s, b, phase1_minimizer(s, b));
    return rep;
}

BoundReport phase3_cone_bound(const SampleSet& s, const BarycentricData& b,
                              const std::array<int, 3>& perm,
                              const Tolerances& tolc) {
    TriangleFrame fr = make_triangle_frame(s, b, perm);

    // Reduced problem: samples {y0, y1, y3} with coefficients -l_i / l2,
    // evaluation point y2. It lands in the triangle configuration.
    detail::BivConfig reduced =
        detail::cone_transform(config_of_frame(fr), {0, 1, 2});
    auto roles = detail::find_triangle_roles(reduced, tolc.sign_rel);
    if (!roles)
        throw Error("cone reduction did not produce a triangle-region "
                    "configuration; the instance is not in the cone region");

    TriangleFrame tfr;
    tfr.y0 = reduced.eval_point;
    tfr.y1 = reduced.pts[roles->roles[0]];
    tfr.y2 = reduced.pts[roles->roles[1]];
    tfr.y3 = reduced.pts[roles->roles[2]];
    tfr.l1 = reduced.l[roles->roles[0]];
    tfr.l2 = reduced.l[roles->roles[1]];
    tfr.l3 = reduced.l[roles->roles[2]];
    tfr.L = fr.L;

    Phase3Core core = phase3_core(tfr, tolc);
    // Undo the division of the objective by -l2 < 0.
    double value = fr.l2 * core.value;

    // Same number through the original moment matrix: -<G, H*>/2.
    double alt = -0.5 * inner(frame_moment(fr), core.hstar.H);
    if (std::abs(alt - value) > 1e-8 * (1.0 + std::abs(value)))
        throw Error("cone bound disagrees between the rescaled reduced value "
                    "and -<G,H*>/2");

    check_witness_equality("phase-3 cone bound", core.witness, s, value, tolc);

    BoundReport rep;
    rep.value = value;
    rep.method = Method::Phase3Cone;
    rep.sharp = Sharpness::ProvenSharp;
    rep.witness = core.witness;
    rep.phase1_value = phase1_bound_at(s, b, phase1_minimizer(s, b));
    return rep;
}

namespace {

BoundReport report_for(const SampleSet& s, const BarycentricData& b,
                       const MomentSpectrum& ms, const MuTable& mu,
                       Region tag, const std::optional<std::array<int, 3>>& perm,
                       const Tolerances& tolc) {
    switch (tag) {
        case Region::ConvexHull:
        case Region::SinglePositive:
            return phase1_bound(s, b);
        case Region::MuNonnegative:
            if (mu.reliable) return phase2_from(s, b, ms, mu, tolc);
            return phase1_bound(s, b); // certificate untrusted; stay valid
        case Region::ObtuseTriangle:
            return phase3_triangle_bound(s, b, *perm, tolc);
        case Region::ObtuseCone:
            return phase3_cone_bound(s, b, *perm, tolc);
        case Region::MuNegativeUnresolved:
            return phase1_bound(s, b);
    }
    throw Error("unreachable region tag");
}

} // namespace

ClassifiedBound classify_and_bound(const SampleSet& s, const Tolerances& tolc) {
    BarycentricData b = barycentric(s, tolc);
    MomentSpectrum ms = moment_matrix(s, b, tolc);
    MuTable mu = mu_table(s, b, ms, tolc);
    RegionClassification cls = classify(s, b, &mu, tolc);

    BoundReport rep = report_for(s, b, ms, mu, cls.tag, cls.perm, tolc);
    if (cls.boundary) {
        rep.boundary = true;
        if (cls.alternate) {
            // Both candidate bounds are valid on the boundary; keep the
            // smaller one. A degenerate alternate is simply dropped.
            try {
                BoundReport alt =
                    report_for(s, b, ms, mu, *cls.alternate, cls.alternate_perm, tolc);
                if (alt.value < rep.value) {
                    alt.boundary = true;
                    rep = alt;
                }
            } catch (const Error&) {
            }
        }
    }

    rep.phase1_value = phase1_bound_at(s, b, phase1_minimizer(s, b));
    rep.phase2_value = 0.5 * s.L * (ms.lambda_plus.sum() - ms.lambda_minus.sum());
    rep.mu_min = mu.min_entry;
    if (!rep.certificate) rep.certificate = mu;
    return {std::move(cls), std::move(rep)};
}

BoundReport best_bound(const SampleSet& s, const Tolerances& tolc) {
    return classify_and_bound(s, tolc).report;
}

} // namespace interpbound
