#pragma once

#include <vector>

#include "cdkit/generators.hpp"
#include "cdkit/space.hpp"

namespace cdkit {

// Standard test fields and ball families shared by the CLI and the
// acceptance runs.

/// Embedding coordinates as fields (circle angles become cos and sin).
std::vector<std::vector<double>> coordinate_fields(const GeneratedSpace& g);

/// d(p, .) for up to `anchors` support points spread evenly by index.
std::vector<std::vector<double>> distance_fields(const MetricMeasureSpace& space, std::size_t anchors);

/// coordinate_fields followed by distance_fields(space, 4).
std::vector<std::vector<double>> field_battery(const GeneratedSpace& g);

/// Radii mesh * 1.5 * 2^k below the support diameter, plus one radius that
/// covers the whole space.
std::vector<double> radius_ladder(const MetricMeasureSpace& space);

/// Every support point as a centre with every ladder radius.
std::vector<Ball> ball_family(const MetricMeasureSpace& space, const std::vector<double>& radii);

}  // namespace cdkit
