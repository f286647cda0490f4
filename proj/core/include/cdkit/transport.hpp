#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "cdkit/geodesics.hpp"
#include "cdkit/lp.hpp"
#include "cdkit/rational.hpp"
#include "cdkit/space.hpp"

namespace cdkit {

/// A probability measure on the points of a space, held exactly.
class ProbMeasure {
 public:
  ProbMeasure() = default;
  /// Throws InputError on negative weights or a total differing from 1 by
  /// more than kMassTolerance. Weights are stored as given.
  explicit ProbMeasure(std::vector<Rational> weights);

  static ProbMeasure delta(std::size_t n, Index at);
  /// nu restricted to a set and renormalized; the set must carry positive mass.
  static ProbMeasure restricted(const MetricMeasureSpace& space, const std::vector<Index>& set);
  /// rho * nu for a nonnegative density with integral 1 (checked exactly).
  static ProbMeasure from_density(const MetricMeasureSpace& space, const std::vector<Rational>& rho);

  std::size_t size() const { return weights_.size(); }
  const Rational& operator[](Index i) const { return weights_[i]; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::vector<double> values() const { return to_doubles(weights_); }
  std::vector<Index> support() const;

  friend bool operator==(const ProbMeasure&, const ProbMeasure&) = default;

 private:
  std::vector<Rational> weights_;
};

/// Parses "uniform" (equal weights on supp(nu)), "nu", "delta:i",
/// "ball:i,r" (nu restricted to the open ball) and "density:file". Density
/// files hold a JSON array of per-point densities with respect to nu, as
/// numbers or rational strings; a float density off by at most
/// kMassTolerance is renormalized.
ProbMeasure parse_measure(const MetricMeasureSpace& space, std::string_view text);

/// mu = rho * nu + mu_s, with mu_s carried by {nu = 0}.
struct LebesgueDecomposition {
  std::vector<Rational> density;  ///< 0 on {nu = 0}
  Rational singular_mass;
  std::vector<Index> singular_points;
};

LebesgueDecomposition lebesgue_decompose(const MetricMeasureSpace& space, const ProbMeasure& mu);

struct PlanEntry {
  Index from;
  Index to;
  Rational mass;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// A coupling stored as sorted sparse (from, to, mass) triples.
class TransferencePlan {
 public:
  TransferencePlan() = default;
  /// Merges duplicate pairs and drops zero entries.
  TransferencePlan(std::size_t n, std::vector<PlanEntry> entries);

  std::size_t size() const { return n_; }
  const std::vector<PlanEntry>& entries() const { return entries_; }
  Rational mass(Index from, Index to) const;
  ProbMeasure first_marginal() const;
  ProbMeasure second_marginal() const;
  /// sum pi_ij c(d_ij) evaluated in doubles.
  double cost(const MetricMeasureSpace& space, int power) const;

  friend bool operator==(const TransferencePlan&, const TransferencePlan&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<PlanEntry> entries_;
};

TransferencePlan product_plan(const ProbMeasure& mu0, const ProbMeasure& mu1);
TransferencePlan diagonal_plan(const ProbMeasure& mu);

struct TransportResult {
  double distance = 0.0;   ///< W_p
  Rational cost;           ///< minimal sum pi_ij d_ij^p (exact in exact mode)
  TransferencePlan plan;
  LpSolution certificate;  ///< the underlying LP, with duals
};

struct TransportOptions {
  Arithmetic mode = Arithmetic::exact;
  PivotRule rule = PivotRule::bland;
};

/// W_2 and an optimal plan, certified by LP duality.
TransportResult solve_w2(const MetricMeasureSpace& space, const ProbMeasure& mu0,
                         const ProbMeasure& mu1, const TransportOptions& options = {});
/// W_1, used to quantify weak-* closeness on a fixed finite space.
TransportResult solve_w1(const MetricMeasureSpace& space, const ProbMeasure& mu0,
                         const ProbMeasure& mu1, const TransportOptions& options = {});

enum class Side { first, second };

/// d pi(x1 | x0) (Side::first) or d pi(x0 | x1) (Side::second).
class ConditionalKernel {
 public:
  ConditionalKernel(Side side, std::map<Index, std::vector<std::pair<Index, Rational>>> rows,
                    std::vector<Rational> marginal);
  Side side() const { return side_; }
  /// Conditional law given the conditioning point. Throws InputError when
  /// the conditioning marginal has no mass there.
  const std::vector<std::pair<Index, Rational>>& given(Index x) const;
  const std::vector<Rational>& marginal() const { return marginal_; }

 private:
  Side side_;
  std::map<Index, std::vector<std::pair<Index, Rational>>> rows_;
  std::vector<Rational> marginal_;
};

ConditionalKernel disintegrate(const TransferencePlan& plan, Side side);

struct WeightedGeodesic {
  DiscreteGeodesic geodesic;
  Rational mass;
};

/// A finite measure on discrete geodesics.
class DynamicalPlan {
 public:
  DynamicalPlan() = default;
  /// Throws InputError when the steps disagree or masses are negative.
  DynamicalPlan(std::size_t n, int steps, std::vector<WeightedGeodesic> geodesics);

  std::size_t size() const { return n_; }
  int steps() const { return steps_; }
  const std::vector<WeightedGeodesic>& geodesics() const { return geodesics_; }
  Rational total_mass() const;
  /// E_* Pi.
  TransferencePlan endpoint_plan() const;
  /// The same plan with every geodesic reversed.
  DynamicalPlan reversed() const;

 private:
  std::size_t n_ = 0;
  int steps_ = 0;
  std::vector<WeightedGeodesic> geodesics_;
};

enum class LiftSelection { canonical, uniform_split };

/// Lifts a plan onto the atlas. canonical: each pair's mass rides its
/// lexicographically least geodesic; uniform_split: mass is split equally
/// over the pair's geodesics. Throws AtlasError for a pair with mass but no
/// atlas entry.
DynamicalPlan lift_to_dynamical(const TransferencePlan& plan, const GeodesicAtlas& atlas,
                                LiftSelection selection);

/// mu_j = (e_{t_j})_* Pi. Throws InputError when j is outside [0, m].
ProbMeasure interpolate(const DynamicalPlan& plan, int j);

struct DensityProfile {
  /// density[j][x] = mu_j(x) / nu(x) on supp(nu), 0 elsewhere.
  std::vector<std::vector<Rational>> density;
  /// mass of mu_j on {nu = 0}.
  std::vector<Rational> singular_mass;
};

DensityProfile density_profile(const DynamicalPlan& plan, const MetricMeasureSpace& space);

/// Grid quadrature for the time integral over [0, 1].
enum class Quadrature {
  uniform,    ///< 1/(m+1) at every grid time, endpoints included
  trapezoid,  ///< 1/(2m) at the endpoints, 1/m inside
};

std::vector<Rational> quadrature_weights(int steps, Quadrature rule);

/// sum_j w_j mu_j(x): the discretized time integral of mu_t.
std::vector<Rational> occupation_measure(const DynamicalPlan& plan, Quadrature rule);

}  // namespace cdkit
