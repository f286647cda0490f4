#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cdkit/rational.hpp"
#include "cdkit/space.hpp"

namespace cdkit {

/// Default number of time steps of the uniform grid t_j = j/m.
inline constexpr int kDefaultSteps = 16;
/// tol_geo = kGeodesicToleranceFactor * mesh(space).
inline constexpr double kGeodesicToleranceFactor = 2.0;
/// Cap on partial chains alive at any breadth-first step.
inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

/// A constant-speed chain p_0..p_m sampled on the grid t_j = j/m.
struct DiscreteGeodesic {
  std::vector<Index> chain;
  double length = 0.0;  ///< d(p_0, p_m)

  int steps() const { return static_cast<int>(chain.size()) - 1; }
  Index start() const { return chain.front(); }
  Index end() const { return chain.back(); }
  DiscreteGeodesic reversed() const;

  friend bool operator==(const DiscreteGeodesic& a, const DiscreteGeodesic& b) {
    return a.chain == b.chain;
  }
  friend bool operator<(const DiscreteGeodesic& a, const DiscreteGeodesic& b) {
    return a.chain < b.chain;
  }
};

DiscreteGeodesic make_geodesic(const MetricMeasureSpace& space, std::vector<Index> chain);

/// e_{t_j}: the point visited at grid index j. Throws InputError if j is
/// outside [0, m].
Index evaluate(const DiscreteGeodesic& g, int j);
std::pair<Index, Index> endpoints(const DiscreteGeodesic& g);

/// Worst violation of the two geodesic invariants (constant speed and
/// minimizing). A chain is a discrete geodesic at tolerance tol iff this is
/// <= tol.
double geodesic_defect(const MetricMeasureSpace& space, const DiscreteGeodesic& g);

/// tol_geo for a space: kGeodesicToleranceFactor * mesh.
double default_geodesic_tolerance(const MetricMeasureSpace& space);

enum class AtlasProvenance { enumerated, analytic };

/// For each ordered pair (x0, x1) of a domain, the nonempty sorted list of
/// discrete geodesics from x0 to x1. All geodesics share the same m.
class GeodesicAtlas {
 public:
  using Key = std::pair<Index, Index>;

  GeodesicAtlas() = default;
  GeodesicAtlas(int steps, AtlasProvenance provenance)
      : steps_(steps), provenance_(provenance) {}

  int steps() const { return steps_; }
  AtlasProvenance provenance() const { return provenance_; }

  /// Replaces the entry for (x0, x1); the list is sorted and deduplicated.
  void set(Index x0, Index x1, std::vector<DiscreteGeodesic> geodesics);
  bool contains(Index x0, Index x1) const;
  /// Throws AtlasError naming the pair when it is absent.
  const std::vector<DiscreteGeodesic>& at(Index x0, Index x1) const;
  const std::map<Key, std::vector<DiscreteGeodesic>>& entries() const { return entries_; }
  std::size_t pair_count() const { return entries_.size(); }
  std::size_t geodesic_count() const;

 private:
  int steps_ = kDefaultSteps;
  AtlasProvenance provenance_ = AtlasProvenance::enumerated;
  std::map<Key, std::vector<DiscreteGeodesic>> entries_;
};

struct EnumerationOptions {
  int steps = kDefaultSteps;
  /// Negative means default_geodesic_tolerance(space).
  double tolerance = -1.0;
  std::size_t budget = kDefaultEnumerationBudget;
};

/// All chains from x0 to x1 through points of the space that satisfy the
/// discrete geodesic invariants, sorted lexicographically. Search is
/// breadth-first over time steps with two-sided pruning. A zero-length pair
/// yields only the constant chain. Throws BudgetExceeded when a step holds
/// more partial chains than options.budget.
std::vector<DiscreteGeodesic> enumerate_geodesics(const MetricMeasureSpace& space, Index x0,
                                                  Index x1, const EnumerationOptions& options);

/// Enumerated atlas over domain x domain (default: supp(nu)).
GeodesicAtlas enumerate_atlas(const MetricMeasureSpace& space, const EnumerationOptions& options,
                              const std::vector<Index>* domain = nullptr);

struct AmbiguousPair {
  Index x0;
  Index x1;
  std::size_t count;
};

struct UniquenessReport {
  Rational unique_pair_mass;  ///< (nu x nu)-mass of pairs with one geodesic
  std::vector<AmbiguousPair> ambiguous_pairs;
};

/// Throws AtlasError naming the first pair of supp(nu)^2 the atlas lacks.
UniquenessReport uniqueness_report(const GeodesicAtlas& atlas, const MetricMeasureSpace& space);

}  // namespace cdkit
