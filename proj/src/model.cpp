#include "interpbound/model.hpp"

#include <string>

#include "interpbound/errors.hpp"

namespace interpbound {

double LinearModel::operator()(const Eigen::VectorXd& u) const {
    return c + g.dot(u - y0);
}

LinearModel fit(const SampleSet& s, std::span<const double> values,
                const Tolerances& tol) {
    if (values.size() != static_cast<std::size_t>(s.n + 1))
        throw InvalidInput("expected " + std::to_string(s.n + 1) + " values");
    PhiMatrix pm = build_phi(s, tol);
    Eigen::VectorXd rhs(s.n + 1);
    for (int i = 0; i <= s.n; ++i) rhs(i) = values[i];
    Eigen::VectorXd cg = pm.phi.partialPivLu().solve(rhs);
    LinearModel m;
    m.c = cg(0);
    m.g = cg.tail(s.n);
    m.y0 = s.y0;
    return m;
}

double error_at_y0(const LinearModel& m, double f_y0) { return m.c - f_y0; }

double lagrange_m_y0(const BarycentricData& b, std::span<const double> values) {
    if (values.size() != b.order.size())
        throw InvalidInput("value count does not match the sample count");
    double acc = 0.0;
    for (std::size_t k = 0; k < b.order.size(); ++k)
        acc += b.ell(static_cast<int>(k) + 1) * values[b.order[k]];
    return acc;
}

} // namespace interpbound
