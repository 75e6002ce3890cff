#include "interpbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "interpbound/errors.hpp"
#include "interpbound/model.hpp"
#include "interpbound/rng.hpp"

namespace interpbound {

const char* family_kind_name(FunctionFamily::Kind k) {
    switch (k) {
        case FunctionFamily::Kind::ClampedQuadratic: return "ClampedQuadratic";
        case FunctionFamily::Kind::RotatedPiecewise: return "RotatedPiecewise";
        case FunctionFamily::Kind::Huberized: return "Huberized";
    }
    return "?";
}

std::pair<double, Eigen::VectorXd> SampledFunction::eval(const Eigen::VectorXd& u) const {
    Eigen::VectorXd d = u - center;
    switch (kind) {
        case Kind::Quadratic: {
            Eigen::VectorXd hd = hessian * d;
            return {linear.dot(d) + 0.5 * d.dot(hd), linear + hd};
        }
        case Kind::Piecewise: {
            double val = 0.5 * L * d.squaredNorm();
            Eigen::VectorXd grad = L * d;
            double t = direction.dot(d);
            if (t < 0.0) {
                val -= L * t * t;
                grad -= 2.0 * L * t * direction;
            }
            return {val, grad};
        }
        case Kind::Huber: {
            Eigen::VectorXd hd = hessian * d;
            double t = direction.dot(d);
            double tc = std::clamp(t, -delta, delta);
            // Huber ramp: quadratic inside the band, linear outside.
            double ridge = std::abs(t) <= delta ? 0.5 * t * t
                                                : delta * std::abs(t) - 0.5 * delta * delta;
            return {0.5 * d.dot(hd) + kappa * ridge, hd + kappa * tc * direction};
        }
    }
    throw Error("unreachable sampled-function kind");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sampling_box(const SampleSet& s) {
    Eigen::VectorXd lo = s.y0, hi = s.y0;
    for (const auto& p : s.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Eigen::VectorXd mid = 0.5 * (lo + hi);
    Eigen::VectorXd half = 1.5 * (hi - lo).cwiseMax(1e-6);
    return {mid - half, mid + half};
}

namespace {

Eigen::VectorXd box_point(const std::pair<Eigen::VectorXd, Eigen::VectorXd>& box,
                          CounterRng& rng) {
    Eigen::VectorXd u(box.first.size());
    for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(box.first(i), box.second(i));
    return u;
}

Eigen::MatrixXd clamped_hessian(int n, double lo_ev, double hi_ev, CounterRng& rng) {
    Eigen::MatrixXd Q = rng.orthogonal(n);
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev(i) = rng.uniform(lo_ev, hi_ev);
    return Q * ev.asDiagonal() * Q.transpose();
}

} // namespace

SampledFunction sample_member(const SampleSet& s, const FunctionFamily& fam, int index) {
    CounterRng rng(fam.seed, static_cast<std::uint64_t>(index));
    auto box = sampling_box(s);
    double diam = std::max(s.diameter(), 1e-6);

    SampledFunction f;
    f.L = s.L;
    switch (fam.kind) {
        case FunctionFamily::Kind::ClampedQuadratic:
            f.kind = SampledFunction::Kind::Quadratic;
            f.hessian = clamped_hessian(s.n, -s.L, s.L, rng);
            f.center = box_point(box, rng);
            f.linear = 0.3 * s.L * diam * rng.normal_vector(s.n);
            break;
        case FunctionFamily::Kind::RotatedPiecewise: {
            f.kind = SampledFunction::Kind::Piecewise;
            f.direction = rng.unit_vector(s.n);
            f.center = box_point(box, rng);
            // The error depends on the center only through its offset
            // along the direction; spread that offset over the projected
            // span of the instance.
            double plo = f.direction.dot(s.y0), phi = plo;
            for (const auto& p : s.points) {
                plo = std::min(plo, f.direction.dot(p));
                phi = std::max(phi, f.direction.dot(p));
            }
            double pad = 0.25 * (phi - plo) + 1e-6;
            double offset = rng.uniform(plo - pad, phi + pad);
            f.center += (offset - f.direction.dot(f.center)) * f.direction;
            break;
        }
        case FunctionFamily::Kind::Huberized: {
            f.kind = SampledFunction::Kind::Huber;
            f.kappa = rng.uniform(0.0, 2.0 * s.L);
            f.hessian = clamped_hessian(s.n, -s.L, s.L - f.kappa, rng);
            f.direction = rng.unit_vector(s.n);
            f.center = box_point(box, rng);
            f.delta = rng.uniform(0.05, 0.5) * diam;
            break;
        }
    }
    return f;
}

EmpiricalMax empirical_max_error(const SampleSet& s, const FunctionFamily& fam,
                                 std::span<const SampledFunction> extra,
                                 const Tolerances& tol) {
    PhiMatrix pm = build_phi(s, tol);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(pm.phi);

    auto error_of = [&](const SampledFunction& f) {
        Eigen::VectorXd rhs(s.n + 1);
        for (int i = 0; i <= s.n; ++i) rhs(i) = f.eval(s.points[i]).first;
        Eigen::VectorXd cg = lu.solve(rhs);
        return std::abs(cg(0) - f.eval(s.y0).first);
    };

    EmpiricalMax out;
    for (std::size_t k = 0; k < extra.size(); ++k) {
        double e = error_of(extra[k]);
        if (e > out.max_error) {
            out.max_error = e;
            out.argmax = -1 - static_cast<int>(k);
        }
    }
    for (int k = 0; k < fam.count; ++k) {
        double e = error_of(sample_member(s, fam, k));
        if (e > out.max_error) {
            out.max_error = e;
            out.argmax = k;
        }
    }
    return out;
}

double check_lipschitz_stronger(const PointEval& f, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& u2, double L) {
    auto [f1, g1] = f(u1);
    auto [f2, g2] = f(u2);
    Eigen::VectorXd d = u1 - u2;
    return f2 + 0.5 * (g1 + g2).dot(d) + 0.25 * L * d.squaredNorm() -
           (g1 - g2).squaredNorm() / (4.0 * L) - f1;
}

double check_descent_lemma(const PointEval& f, const Eigen::VectorXd& u1,
                           const Eigen::VectorXd& u2, double L) {
    auto [f1, g1] = f(u1);
    auto [f2, g2] = f(u2);
    (void)g2;
    Eigen::VectorXd d = u2 - u1;
    return 0.5 * L * d.squaredNorm() - std::abs(f2 - f1 - g1.dot(d));
}

RegionMap sweep_region_map(const SampleSet& tmpl, const GridSpec& grid,
                           const Tolerances& tol) {
    if (tmpl.n != 2) throw InvalidInput("region map requires a bivariate template");
    if (grid.resolution < 2) throw InvalidInput("grid resolution must be at least 2");

    RegionMap map;
    map.grid = grid;
    map.cells.reserve(static_cast<std::size_t>(grid.resolution) * grid.resolution);

    SampleSet s = tmpl;
    for (int iy = 0; iy < grid.resolution; ++iy) {
        double y = grid.ymin + (grid.ymax - grid.ymin) * iy / (grid.resolution - 1);
        for (int ix = 0; ix < grid.resolution; ++ix) {
            double x = grid.xmin + (grid.xmax - grid.xmin) * ix / (grid.resolution - 1);
            RegionMapCell cell;
            cell.x = x;
            cell.y = y;
            s.y0 = Eigen::Vector2d(x, y);
            try {
                ClassifiedBound cb = classify_and_bound(s, tol);
                cell.tag = cb.region.tag;
                cell.bound = cb.report.value;
                cell.mu_min = cb.report.mu_min.value_or(0.0);
                cell.sharp = cb.report.proven_sharp();
                cell.boundary = cb.report.boundary;
            } catch (const Error&) {
                cell.failed = true;
            }
            map.cells.push_back(cell);
        }
    }
    return map;
}

namespace {

double pair_slack_min(const PointEval& f, double L,
                      const std::pair<Eigen::VectorXd, Eigen::VectorXd>& box,
                      int pairs, CounterRng& rng, bool stronger) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < pairs; ++k) {
        Eigen::VectorXd u1 = box_point(box, rng);
        Eigen::VectorXd u2 = box_point(box, rng);
        double s = stronger ? check_lipschitz_stronger(f, u1, u2, L)
                            : check_descent_lemma(f, u1, u2, L);
        worst = std::min(worst, s);
    }
    return worst;
}

double gradient_ratio_max(const PointEval& f,
                          const std::pair<Eigen::VectorXd, Eigen::VectorXd>& box,
                          int pairs, CounterRng& rng) {
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        Eigen::VectorXd u1 = box_point(box, rng);
        Eigen::VectorXd u2 = box_point(box, rng);
        double dist = (u1 - u2).norm();
        if (dist < 1e-12) continue;
        worst = std::max(worst, (f(u1).second - f(u2).second).norm() / dist);
    }
    return worst;
}

} // namespace

VerifyReport verify_instance(const SampleSet& s, int samples, std::uint64_t seed,
                             const Tolerances& tolc) {
    if (samples < 1) throw InvalidInput("samples must be at least 1");
    VerifyReport rep;
    auto add = [&](std::string name, double margin, int count) {
        rep.checks.push_back({std::move(name), margin, count, margin >= 0.0});
    };

    BarycentricData b = barycentric(s, tolc);
    MomentSpectrum ms = moment_matrix(s, b, tolc);
    MuTable mu = mu_table(s, b, ms, tolc);
    ClassifiedBound cb = classify_and_bound(s, tolc);
    auto box = sampling_box(s);
    double diam = std::max(s.diameter(), 1e-6);
    double fscale = 1.0 + s.L * diam * diam;

    {
        double point_scale = s.y0.cwiseAbs().maxCoeff();
        Eigen::VectorXd wsum = -s.y0;
        double lsum = -1.0;
        for (int i = 1; i <= s.n + 1; ++i) {
            const Eigen::VectorXd& y = point_at(s, b, i);
            point_scale = std::max(point_scale, y.cwiseAbs().maxCoeff());
            wsum += b.ell(i) * y;
            lsum += b.ell(i);
        }
        double resid = std::max(std::abs(lsum), wsum.cwiseAbs().maxCoeff());
        add("barycentric_identities",
            1e-9 * (1.0 + point_scale) * std::max(1.0, b.ell.cwiseAbs().maxCoeff()) - resid,
            1);
    }
    {
        CounterRng rng(seed, 1);
        double worst = 0.0;
        double scale = 1.0;
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXd u1 = box_point(box, rng);
            Eigen::VectorXd u2 = box_point(box, rng);
            worst = std::max(worst, recentring_residual(s, b, u1, u2));
            for (int i = 0; i <= s.n + 1; ++i) {
                const Eigen::VectorXd& y = point_at(s, b, i);
                scale = std::max(scale, std::abs(b.ell(i)) * (y - u1).norm() * (y - u2).norm());
            }
        }
        add("recentring_identity", 1e-9 - worst / scale, 100);
    }
    {
        double scale_sum = 1.0 + b.ell.cwiseAbs().maxCoeff();
        double scale_proj = s.L * (1.0 + diam) *
                            (1.0 + mu.mu.cwiseAbs().sum() + b.ell.cwiseAbs().sum());
        double worst = std::max(
            {mu.residual_row_sums / scale_sum, mu.residual_col_sums / scale_sum,
             mu.residual_proj_plus / scale_proj, mu.residual_proj_minus / scale_proj});
        add("mu_identities", 1e-8 - worst, 1);
    }

    const FunctionFamily::Kind kinds[3] = {FunctionFamily::Kind::ClampedQuadratic,
                                           FunctionFamily::Kind::RotatedPiecewise,
                                           FunctionFamily::Kind::Huberized};
    int members = std::min(samples, 64);
    {
        double worst_ratio = 0.0;
        double worst_descent = std::numeric_limits<double>::infinity();
        double worst_stronger = std::numeric_limits<double>::infinity();
        double worst_psi = -std::numeric_limits<double>::infinity();
        CounterRng rng(seed, 2);
        CounterRng hrng(seed, 3);
        for (auto kind : kinds) {
            FunctionFamily fam{kind, CounterRng::mix(seed ^ static_cast<int>(kind)), members};
            for (int k = 0; k < members; ++k) {
                SampledFunction f = sample_member(s, fam, k);
                PointEval ev = [&f](const Eigen::VectorXd& u) { return f.eval(u); };
                worst_ratio = std::max(worst_ratio, gradient_ratio_max(ev, box, 20, rng));
                worst_descent =
                    std::min(worst_descent, pair_slack_min(ev, s.L, box, 20, rng, false));
                worst_stronger =
                    std::min(worst_stronger, pair_slack_min(ev, s.L, box, 20, rng, true));
                for (int t = 0; t < 10; ++t) {
                    Eigen::MatrixXd H = (t % 2 == 0)
                        ? Eigen::MatrixXd(s.L * hrng.orthogonal(s.n))
                        : clamped_hessian(s.n, -s.L, s.L, hrng);
                    double p = psi(ev, box_point(box, rng), box_point(box, rng), H, s.L);
                    worst_psi = std::max(worst_psi, p);
                }
            }
        }
        int pair_count = 3 * members * 20;
        add("lipschitz_certificates", s.L * (1.0 + 1e-6) - worst_ratio, pair_count);
        add("descent_lemma", worst_descent + 1e-9 * fscale, pair_count);
        add("lipschitz_stronger", worst_stronger + 1e-9 * fscale, pair_count);
        add("psi_nonpositive", 1e-9 * fscale - worst_psi, 3 * members * 10);
    }

    if (cb.report.witness) {
        double achieved = achieved_error(*cb.report.witness, s, tolc);
        add("witness_achieves_bound",
            1e-8 * (1.0 + cb.report.value) - std::abs(achieved - cb.report.value), 1);
    }
    for (auto kind : kinds) {
        FunctionFamily fam{kind, CounterRng::mix(seed + 11 + static_cast<int>(kind)),
                           samples};
        EmpiricalMax em = empirical_max_error(s, fam, {}, tolc);
        add(std::string("empirical_soundness_") + family_kind_name(kind),
            cb.report.value + 1e-8 * (1.0 + cb.report.value) - em.max_error, samples);
    }

    rep.worst_slack = std::numeric_limits<double>::infinity();
    rep.pass = true;
    for (const auto& c : rep.checks) {
        rep.worst_slack = std::min(rep.worst_slack, c.margin);
        rep.pass = rep.pass && c.pass;
    }
    return rep;
}

int count_negative_mu_components(const RegionMap& map, double tol) {
    const int res = map.grid.resolution;
    if (tol <= 0.0) tol = 1e-9;
    auto negative = [&](int ix, int iy) {
        const RegionMapCell& c = map.cells[static_cast<std::size_t>(iy) * res + ix];
        return !c.failed && c.mu_min < -tol;
    };
    std::vector<char> seen(map.cells.size(), 0);
    int components = 0;
    for (int iy = 0; iy < res; ++iy)
        for (int ix = 0; ix < res; ++ix) {
            std::size_t at = static_cast<std::size_t>(iy) * res + ix;
            if (seen[at] || !negative(ix, iy)) continue;
            ++components;
            std::deque<std::pair<int, int>> queue{{ix, iy}};
            seen[at] = 1;
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                const int dx[4] = {1, -1, 0, 0};
                const int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int nx = cx + dx[k], ny = cy + dy[k];
                    if (nx < 0 || ny < 0 || nx >= res || ny >= res) continue;
                    std::size_t nat = static_cast<std::size_t>(ny) * res + nx;
                    if (seen[nat] || !negative(nx, ny)) continue;
                    seen[nat] = 1;
                    queue.emplace_back(nx, ny);
                }
            }
        }
    return components;
}

} // namespace interpbound
