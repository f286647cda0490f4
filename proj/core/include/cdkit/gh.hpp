#pragma once

#include <string>
#include <vector>

#include "cdkit/democratic.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/geodesics.hpp"
#include "cdkit/space.hpp"
#include "cdkit/transport.hpp"

namespace cdkit {

using PointMap = std::vector<Index>;

struct ApproximationReport {
  double epsilon_min = 0.0;
  double distortion = 0.0;
  Index distortion_y0 = 0, distortion_y1 = 0;
  double surjectivity = 0.0;
  Index surjectivity_x = 0;  ///< point of X farthest from the image
};

/// Smallest eps for which f: Y -> X is an eps-approximation, with witnesses.
/// Throws InputError when f is not a total map into X.
ApproximationReport validate_approximation(const PointMap& f, const MetricMeasureSpace& Y,
                                           const MetricMeasureSpace& X);

/// f_* mu, exact.
ProbMeasure pushforward(const PointMap& f, const ProbMeasure& mu, std::size_t target_size);

struct LiftedGeodesic {
  DiscreteGeodesic source;
  DiscreteGeodesic lifted;
  double distance = 0.0;  ///< max_j d_X(lifted(j), f(source(j)))
};

/// The X-atlas geodesic closest to f(gamma) in sup distance over grid
/// times; ties go to the lexicographically smallest chain. Throws InputError
/// when the atlas step count differs, AtlasError when the atlas is empty.
LiftedGeodesic lift_geodesic(const PointMap& f, const DiscreteGeodesic& gamma,
                             const MetricMeasureSpace& X, const GeodesicAtlas& atlas);

struct PlanTransportReport {
  DynamicalPlan lifted;
  double max_lift_distance = 0.0;
  /// mass-weighted d(f y0, T0) + d(f y1, T1): the cost of the coupling of
  /// (f,f)_* pi with E_* Pi_X induced by the lift, hence a W1 upper bound
  /// for the product metric.
  double endpoint_w1 = 0.0;
  /// W1((f)_* mu_{Y,j}, mu_{X,j}) per grid time, solved in float mode.
  std::vector<double> time_w1;
  double max_time_w1() const;
};

PlanTransportReport transport_plan(const PointMap& f, const DynamicalPlan& plan,
                                   const MetricMeasureSpace& X, const GeodesicAtlas& atlas);

struct BallDescriptor {
  bool whole = false;
  Index center = 0;  ///< in the target space
  double radius = 0.0;

  /// "all" or "center,radius".
  static BallDescriptor parse(std::string_view text);
};

struct StabilityLevel {
  std::string spec;
  std::size_t points = 0;
  double epsilon = 0.0;
  Index center = 0;  ///< level point whose image is nearest the target centre
  double c_star = 0.0;
  Rational ambiguous_mass;
  bool closed_ball_differs = false;  ///< nu[B] != nu[closed B] on this level
  double max_lift_distance = 0.0;
  double endpoint_w1 = 0.0;
  double max_time_w1 = 0.0;
};

struct StabilityReport {
  std::string target;
  BallDescriptor ball;
  int steps = 0;
  std::vector<StabilityLevel> levels;
  double c_bound = 0.0;
  bool bounded = false;         ///< every c_star <= c_bound
  double w1_decrease = 0.0;     ///< 1 - finest/coarsest of max(endpoint, time) W1
  bool decreasing = false;      ///< w1_decrease >= required
  double required_decrease = 0.0;

  std::string to_csv() const;
};

struct StabilityOptions {
  int steps = 8;
  double c_bound = 2.25;
  double required_decrease = 0.3;
  Arithmetic mode = Arithmetic::exact;
};

/// Each level is mapped into the target by nearest points (coordinates from
/// the generators). Its DM plan on the corresponding ball is lifted into
/// the target atlas. Levels run concurrently.
StabilityReport dm_stability_experiment(const std::vector<SpaceSpec>& levels,
                                        const SpaceSpec& target, const BallDescriptor& ball,
                                        const StabilityOptions& options = {});

}  // namespace cdkit
