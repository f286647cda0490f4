#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdkit/geodesics.hpp"
#include "cdkit/space.hpp"

namespace cdkit {

/// Continuum model a generated space discretizes.
enum class ModelKind { none, interval, circle, sphere, grid, gaussian_line, graph };

/// A generator name with its parameters, written "name:key=value,key=value".
///
///   interval:n=9[,length=1]         n equispaced points on [0, length]
///   circle:n=16                     n equispaced points, circumference 2*pi
///   sphere:n=500[,atlas=1]          Fibonacci lattice on the unit sphere
///   grid:nx=5,ny=5 | grid:n=5       lattice on [0,1]^2, Euclidean distance
///   gaussline:n=81[,half_width=4]   line [-w, w], nu proportional to exp(-x^2/2)
///   graph:edges=0-1:1.5;1-2         shortest-path metric, uniform nu
///   file:path.json                  space file
///
/// Every model except graph and file also accepts m=<steps> (default 16) for
/// its analytic atlas, and atlas=0 to skip building one. Sphere atlases are
/// off unless atlas=1 because snapping needs a nearest-point search per
/// sample.
struct SpaceSpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::string path;  ///< for file:

  static SpaceSpec parse(std::string_view text);
  std::string str() const;
};

struct GeneratedSpace {
  MetricMeasureSpace space;
  std::optional<GeodesicAtlas> atlas;
  ModelKind model = ModelKind::none;
  /// Embedding coordinates per point: interval/gaussline {x}, circle {angle},
  /// grid {x, y}, sphere {x, y, z}. Empty for graph/file.
  std::vector<std::vector<double>> coords;
};

/// Builds the space (and analytic atlas) for a spec. Throws InputError for
/// unknown generator names or out-of-range parameters.
GeneratedSpace generate(const SpaceSpec& spec);
GeneratedSpace generate(std::string_view spec_text);

/// Analytic atlas of a model space for m steps: each ordered pair maps to the
/// continuum geodesic(s) sampled at t_j and snapped to the nearest point,
/// rounding half up along each coordinate. Circles store both arcs for
/// antipodal pairs and the minor arc otherwise.
GeodesicAtlas analytic_atlas(const GeneratedSpace& generated, int steps);

/// Continuum distance between two embedding coordinates of a model.
double model_distance(ModelKind model, const std::vector<double>& a, const std::vector<double>& b);

/// Nearest-point map from one generated space into another of the same
/// model (ties go to the lower index).
std::vector<Index> nearest_point_map(const GeneratedSpace& from, const GeneratedSpace& to);

}  // namespace cdkit
