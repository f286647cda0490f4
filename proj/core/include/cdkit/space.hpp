#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdkit/rational.hpp"

namespace cdkit {

using Index = std::size_t;

/// Absolute slack for metric axioms on floating-point distance input.
inline constexpr double kMetricTolerance = 1e-9;
/// Absolute slack for the total mass of floating-point measure input.
inline constexpr double kMassTolerance = 1e-9;

/// A finite metric-measure space (X, d, nu).
///
/// Distances are stored as doubles; when the input supplied them as exact
/// rationals the exact values are kept as well and validation compares them
/// exactly. The reference measure is always held as rationals: rational input
/// is kept verbatim, floating input is converted to its exact binary value.
class MetricMeasureSpace {
 public:
  MetricMeasureSpace() = default;

  /// `dist` is row-major n x n. Shapes are checked here; metric axioms are
  /// checked by validate_space() so that broken input can still be loaded
  /// and reported on.
  MetricMeasureSpace(std::vector<std::string> ids, std::vector<double> dist,
                     std::vector<Rational> nu, bool nu_exact,
                     std::optional<std::vector<Rational>> dist_exact = std::nullopt);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(Index i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }

  double d(Index i, Index j) const { return dist_[i * size() + j]; }
  const std::vector<double>& distances() const { return dist_; }
  bool has_exact_distances() const { return dist_exact_.has_value(); }
  /// Exact distance when available, otherwise the exact value of the double.
  Rational d_exact(Index i, Index j) const;

  const Rational& nu(Index i) const { return nu_[i]; }
  double nu_value(Index i) const { return nu_double_[i]; }
  const std::vector<Rational>& measure() const { return nu_; }
  const std::vector<double>& measure_values() const { return nu_double_; }
  bool has_exact_measure() const { return nu_exact_; }

  /// {i : nu_i > 0}, ascending.
  const std::vector<Index>& support() const { return support_; }
  bool in_support(Index i) const { return nu_[i] > 0; }

  /// Largest nearest-neighbour distance; 0 for a one-point space.
  double mesh() const { return mesh_; }
  /// Largest distance between two points of supp(nu).
  double support_diameter() const;
  double diameter() const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> dist_;
  std::optional<std::vector<Rational>> dist_exact_;
  std::vector<Rational> nu_;
  std::vector<double> nu_double_;
  bool nu_exact_ = false;
  std::vector<Index> support_;
  double mesh_ = 0.0;
};

enum class ViolationKind {
  shape,
  negative_distance,
  nonzero_diagonal,
  asymmetric,
  coincident_points,
  triangle,
  negative_mass,
  total_mass,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
  /// Witness indices. For a triangle violation: (i, k, j) with
  /// d(i,j) > d(i,k) + d(k,j).
  std::vector<Index> witness;
  double amount = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool exact = false;  ///< comparisons were carried out in exact arithmetic
  bool passed() const { return violations.empty(); }
};

/// Checks every metric-measure axiom and reports each violated one once,
/// with the worst witness.
ValidationReport validate_space(const MetricMeasureSpace& space);

/// Open ball {i : d(center, i) < radius}.
struct Ball {
  Index center = 0;
  double radius = 0.0;
  std::vector<Index> members;
  Rational mass;
  bool contains(Index i) const;
};

/// Open ball. Throws InputError when radius <= 0 or center is out of range.
Ball ball(const MetricMeasureSpace& space, Index center, double radius);
/// Closed ball {i : d(center, i) <= radius}, used to detect radii that sit
/// exactly on a point (nu[B] != nu[closure B]).
Ball closed_ball(const MetricMeasureSpace& space, Index center, double radius);
/// Every point of the space, as a ball around point 0 with radius diam + 1.
Ball whole_space_ball(const MetricMeasureSpace& space);

/// sup over centers in X and the given radii, restricted to balls of
/// positive mass, of nu[2B] / nu[B]. Throws InputError when radii is empty
/// or every sampled ball has zero mass.
double doubling_constant(const MetricMeasureSpace& space, std::span<const double> radii);

}  // namespace cdkit
