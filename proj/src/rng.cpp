#include "interpbound/rng.hpp"

#include <cmath>
#include <numbers>

namespace interpbound {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    key_ = mix(seed + kGamma) ^ mix(stream * kGamma + 1);
}

std::uint64_t CounterRng::at(std::uint64_t k) const {
    return mix(key_ + (k + 1) * kGamma);
}

std::uint64_t CounterRng::next_u64() { return at(counter_++); }

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double CounterRng::normal() {
    // Box-Muller; u1 kept away from 0 so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t m) {
    return m == 0 ? 0 : next_u64() % m;
}

Eigen::VectorXd CounterRng::uniform_vector(int dim, double lo, double hi) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = uniform(lo, hi);
    return v;
}

Eigen::VectorXd CounterRng::normal_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal();
    return v;
}

Eigen::VectorXd CounterRng::unit_vector(int dim) {
    while (true) {
        Eigen::VectorXd v = normal_vector(dim);
        double norm = v.norm();
        if (norm > 1e-12) return v / norm;
    }
}

Eigen::MatrixXd CounterRng::orthogonal(int dim) {
    Eigen::MatrixXd A(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) A(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    return Q;
}

} // namespace interpbound
