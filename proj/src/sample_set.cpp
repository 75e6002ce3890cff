#include "interpbound/sample_set.hpp"

#include <cmath>
#include <string>

#include "interpbound/errors.hpp"

namespace interpbound {

void SampleSet::validate() const {
    if (n <= 0) throw InvalidInput("dimension n must be positive");
    if (static_cast<int>(points.size()) != n + 1)
        throw InvalidInput("expected exactly n+1 = " + std::to_string(n + 1) +
                           " sample points, got " + std::to_string(points.size()));
    for (const auto& p : points) {
        if (p.size() != n) throw InvalidInput("sample point of wrong dimension");
        if (!p.allFinite()) throw InvalidInput("sample point has non-finite entries");
    }
    if (y0.size() != n) throw InvalidInput("y0 of wrong dimension");
    if (!y0.allFinite()) throw InvalidInput("y0 has non-finite entries");
    if (!(L > 0.0) || !std::isfinite(L))
        throw InvalidInput("Lipschitz constant L must be positive and finite");
}

double SampleSet::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        d = std::max(d, (points[i] - y0).norm());
        for (std::size_t j = i + 1; j < points.size(); ++j)
            d = std::max(d, (points[i] - points[j]).norm());
    }
    return d;
}

} // namespace interpbound
