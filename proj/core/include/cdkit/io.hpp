#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cdkit/curvature.hpp"
#include "cdkit/democratic.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/gh.hpp"
#include "cdkit/inequalities.hpp"
#include "cdkit/space.hpp"
#include "cdkit/transport.hpp"

namespace cdkit {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Space files:
///   {"points": [...ids], "dist": [[...]], "nu": [...],
///    "atlas": {"m": 8, "pairs": {"i,j": [[i, ..., j], ...]}}}
/// Distances and masses are numbers or rational strings ("1/3"); the
/// measure is exact when every entry is an integer or a string. "points"
/// may also be a count.
GeneratedSpace space_from_json(const Json& j);
GeneratedSpace load_space_file(const std::string& path);
Json space_to_json(const MetricMeasureSpace& space, const GeodesicAtlas* atlas = nullptr);

/// Rationals as {"value": double, "exact": "p/q"}.
Json rational_json(const Rational& q);
Json measure_json(const ProbMeasure& mu);
/// Sparse [from, to, mass] triples with masses as "p/q" strings.
Json plan_json(const TransferencePlan& plan);
Json dynamical_plan_json(const DynamicalPlan& plan);
Json ball_json(const Ball& ball, const MetricMeasureSpace& space);

Json report_json(const ValidationReport& r);
Json report_json(const TransportResult& r);
Json report_json(const DmCertificate& r, const MetricMeasureSpace& space);
Json report_json(const DensityBoundReport& r);
Json report_json(const CdReport& r);
Json report_json(const InftyConvexityReport& r);
Json report_json(const DiameterReport& r);
Json report_json(const LocalPoincareReport& r);
Json report_json(const GlobalPoincareReport& r);
Json report_json(const SobolevReport& r);
Json report_json(const EmbeddingReport& r);
Json report_json(const ElementaryBoundsReport& r);
Json report_json(const StabilityReport& r);

}  // namespace cdkit
