#pragma once

#include <vector>

#include "cdkit/geodesics.hpp"
#include "cdkit/lp.hpp"
#include "cdkit/space.hpp"
#include "cdkit/transport.hpp"

namespace cdkit {

/// Example-style construction Pi = S_*(mu x mu) for an atlas with exactly one
/// geodesic per pair. Throws AtlasError naming the first ambiguous or missing
/// pair of positive mu x mu mass.
DynamicalPlan build_democratic_unique(const ProbMeasure& mu, const GeodesicAtlas& atlas);

struct DmOptions {
  Arithmetic mode = Arithmetic::exact;
  Quadrature quadrature = Quadrature::uniform;
};

/// A democratic plan for one ball together with its optimal constant.
struct DmCertificate {
  Ball ball;
  ProbMeasure mu;  ///< 1_B nu / nu[B]
  DynamicalPlan plan;
  /// max_x occupation(x) nu[B] / nu(x) over supp(nu), recomputed from plan.
  Rational c_star;
  /// Occupation per point: the quadrature average of mu_j.
  std::vector<Rational> occupation;
  /// A point attaining c_star.
  Index argmax = 0;
  Quadrature quadrature = Quadrature::uniform;
  Arithmetic mode = Arithmetic::exact;
  int steps = 0;
  /// mu x mu mass of pairs with more than one geodesic; 0 when the atlas is
  /// unique on B x B.
  Rational ambiguous_mass;
  /// Variables and rows left after fixing single-geodesic pairs.
  std::size_t lp_variables = 0;
  std::size_t lp_rows = 0;
  /// LP objective; equals c_star in exact mode.
  double lp_objective = 0.0;

  double c_star_value() const { return c_star.get_d(); }
};

/// Minimizes C over democratic plans supported on the atlas:
///   sum over geodesics of a pair = mu(x0) mu(x1)  for all pairs in B x B
///   occupation(x) <= C nu(x) / nu[B]              for all x
/// Pairs with a single geodesic are fixed before the LP is built. Throws
/// InputError when nu[B] = 0, AtlasError when a pair in B x B is missing,
/// and NumericalError when the LP is infeasible (occupation forced onto a
/// nu-null point).
DmCertificate dm_optimal_constant(const MetricMeasureSpace& space, const Ball& ball,
                                  const GeodesicAtlas& atlas, const DmOptions& options = {});

struct DmBallResult {
  Ball ball;
  double c_star = 0.0;
  bool passed = false;
};

struct DmVerification {
  double constant = 0.0;
  std::vector<DmBallResult> balls;
  std::size_t worst = 0;  ///< index of the ball with the largest c_star
  bool passed = false;
};

/// DM(C) on the given balls: c_star <= C for each (compared exactly in
/// exact mode). Balls are solved concurrently.
DmVerification verify_dm(const MetricMeasureSpace& space, const Rational& constant,
                         const std::vector<Ball>& balls, const GeodesicAtlas& atlas,
                         const DmOptions& options = {});

struct DensityBoundRow {
  int j = 0;
  double t = 0.0;
  double max_density = 0.0;
  double threshold = 0.0;  ///< min(t^-N, (1-t)^-N) / nu[B]
  double margin = 0.0;     ///< threshold * (1 + slack) - max_density
  bool passed = false;
};

struct DensityBoundReport {
  double dimension = 0.0;
  double slack = 0.0;
  std::vector<DensityBoundRow> rows;
  bool passed = false;
};

/// max_x rho_j(x) <= min(t_j^-N, (1-t_j)^-N) / ball_mass * (1 + slack) at
/// every grid time. Mass on nu-null points counts as infinite density.
DensityBoundReport density_bound_check(const DynamicalPlan& plan, const MetricMeasureSpace& space,
                                       double dimension, const Rational& ball_mass,
                                       double slack = 0.0);

struct LpNormRow {
  int j = 0;
  double t = 0.0;
  double norm = 0.0;       ///< ||rho_j||_{L^p(nu)}
  double bound = 0.0;      ///< min(t^{-N/p'}, (1-t)^{-N/p'}) ||rho||_{L^p(nu)}
  double margin = 0.0;
  bool passed = false;
};

struct LpNormReport {
  double exponent = 0.0;
  double dimension = 0.0;
  double slack = 0.0;
  double base_norm = 0.0;
  std::vector<LpNormRow> rows;
  bool passed = false;
};

/// L^p form of the density bound for a plan coupling rho nu to itself.
/// Throws InputError unless 1 < p < inf.
LpNormReport lp_density_bound_check(const DynamicalPlan& plan, const MetricMeasureSpace& space,
                                    const std::vector<Rational>& rho, double exponent,
                                    double dimension, double slack = 0.0);

}  // namespace cdkit
