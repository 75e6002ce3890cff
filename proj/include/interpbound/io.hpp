#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "interpbound/bounds.hpp"
#include "interpbound/geometry.hpp"
#include "interpbound/oracle.hpp"
#include "interpbound/sample_set.hpp"
#include "interpbound/witness.hpp"

namespace interpbound {

/// {"n": int, "points": [[...], ...], "y0": [...], "L": real}
SampleSet sample_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SampleSet& s);

/// {"value", "method", "sharp", "mu_min", "phase1", "phase2"}
nlohmann::json to_json(const BoundReport& r);

nlohmann::json to_json(const RegionClassification& c);

nlohmann::json witness_to_json(const WorstCaseFunction& f);

/// {"checks": [{"name", "worst_slack", "samples", "pass"}, ...],
///  "worst_slack": real, "pass": bool}
nlohmann::json to_json(const VerifyReport& r);

/// Columns: x, y, class, bound, mu_min, sharp.
void write_region_map_csv(std::ostream& out, const RegionMap& map);

/// Flat colored raster of the class grid with the simplex overlaid.
void write_region_map_svg(std::ostream& out, const RegionMap& map, const SampleSet& s);

/// Columns: u_1..u_n, value, grad_1..grad_n, sampled over the instance
/// box plus the instance's own points.
void write_witness_csv(std::ostream& out, const WorstCaseFunction& f,
                       const SampleSet& s, int samples, std::uint64_t seed);

} // namespace interpbound
