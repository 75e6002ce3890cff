#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace interpbound {

/// Counter-based deterministic generator built on the SplitMix64 mixing
/// function. A stream is identified by (seed, stream id); draw k of a
/// stream is mix(key + (k+1) * GAMMA), so any draw is random-access and
/// workers can own disjoint streams of one seed. Identical (seed,
/// stream, k) gives identical output on every run of one platform.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Stateless access to draw k of the stream.
    std::uint64_t at(std::uint64_t k) const;

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (consumes two draws).
    double normal();
    /// Uniform over {0, 1, ..., m-1}.
    std::uint64_t below(std::uint64_t m);

    Eigen::VectorXd uniform_vector(int dim, double lo, double hi);
    Eigen::VectorXd normal_vector(int dim);
    /// Uniformly distributed unit vector.
    Eigen::VectorXd unit_vector(int dim);
    /// Haar-ish random orthogonal matrix: QR of a standard normal matrix
    /// with the signs of diag(R) folded into Q.
    Eigen::MatrixXd orthogonal(int dim);

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace interpbound
