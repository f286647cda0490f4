#include "cdkit/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "cdkit/error.hpp"

namespace cdkit {

DiscreteGeodesic DiscreteGeodesic::reversed() const {
  DiscreteGeodesic r = *this;
  std::reverse(r.chain.begin(), r.chain.end());
  return r;
}

DiscreteGeodesic make_geodesic(const MetricMeasureSpace& space, std::vector<Index> chain) {
  if (chain.size() < 2) throw InputError("a geodesic chain needs at least two entries (m >= 1)");
  for (Index p : chain)
    if (p >= space.size()) throw InputError("geodesic chain visits point " + std::to_string(p) + " outside the space");
  DiscreteGeodesic g;
  g.length = space.d(chain.front(), chain.back());
  g.chain = std::move(chain);
  return g;
}

Index evaluate(const DiscreteGeodesic& g, int j) {
  if (j < 0 || j > g.steps())
    throw InputError("grid index " + std::to_string(j) + " outside [0, " + std::to_string(g.steps()) + "]");
  return g.chain[static_cast<std::size_t>(j)];
}

std::pair<Index, Index> endpoints(const DiscreteGeodesic& g) { return {g.start(), g.end()}; }

double geodesic_defect(const MetricMeasureSpace& space, const DiscreteGeodesic& g) {
  const int m = g.steps();
  const double L = space.d(g.start(), g.end());
  double worst = 0.0;
  double walked = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      double expected = static_cast<double>(j - i) / m * L;
      worst = std::max(worst, std::abs(space.d(g.chain[i], g.chain[j]) - expected));
    }
    if (i < m) walked += space.d(g.chain[i], g.chain[i + 1]);
  }
  return std::max(worst, walked - L);
}

double default_geodesic_tolerance(const MetricMeasureSpace& space) {
  return kGeodesicToleranceFactor * space.mesh();
}

void GeodesicAtlas::set(Index x0, Index x1, std::vector<DiscreteGeodesic> geodesics) {
  if (geodesics.empty())
    throw AtlasError("empty geodesic list for pair (" + std::to_string(x0) + "," + std::to_string(x1) + ")");
  for (const auto& g : geodesics) {
    if (g.steps() != steps_)
      throw AtlasError("geodesic with " + std::to_string(g.steps()) + " steps in an atlas with m = " +
                       std::to_string(steps_));
    if (g.start() != x0 || g.end() != x1)
      throw AtlasError("geodesic endpoints do not match pair (" + std::to_string(x0) + "," +
                       std::to_string(x1) + ")");
  }
  std::sort(geodesics.begin(), geodesics.end());
  geodesics.erase(std::unique(geodesics.begin(), geodesics.end()), geodesics.end());
  entries_[{x0, x1}] = std::move(geodesics);
}

bool GeodesicAtlas::contains(Index x0, Index x1) const { return entries_.count({x0, x1}) > 0; }

const std::vector<DiscreteGeodesic>& GeodesicAtlas::at(Index x0, Index x1) const {
  auto it = entries_.find({x0, x1});
  if (it == entries_.end())
    throw AtlasError("atlas has no geodesic for pair (" + std::to_string(x0) + "," + std::to_string(x1) + ")");
  return it->second;
}

std::size_t GeodesicAtlas::geodesic_count() const {
  std::size_t total = 0;
  for (const auto& [key, list] : entries_) total += list.size();
  return total;
}

std::vector<DiscreteGeodesic> enumerate_geodesics(const MetricMeasureSpace& space, Index x0, Index x1,
                                                  const EnumerationOptions& options) {
  const int m = options.steps;
  if (m < 1) throw InputError("m must be at least 1");
  if (x0 >= space.size() || x1 >= space.size()) throw InputError("endpoint out of range");
  const double L = space.d(x0, x1);
  // Chains sitting exactly on the tolerance should not be decided by the
  // order of floating-point sums.
  const double tol = (options.tolerance < 0 ? default_geodesic_tolerance(space) : options.tolerance) +
                     1e-12 * (1.0 + L);

  if (L <= 0.0) {
    return {make_geodesic(space, std::vector<Index>(static_cast<std::size_t>(m) + 1, x0))};
  }

  struct Partial {
    std::vector<Index> chain;
    double walked;
  };
  std::vector<Partial> layer{{{x0}, 0.0}};
  const std::size_t n = space.size();

  for (int j = 1; j <= m; ++j) {
    std::vector<Partial> next;
    const double to_go = static_cast<double>(m - j) / m * L;
    for (const auto& p : layer) {
      const Index last = p.chain.back();
      for (Index c = 0; c < n; ++c) {
        if (j == m && c != x1) continue;
        if (std::abs(space.d(c, x1) - to_go) > tol) continue;
        double walked = p.walked + space.d(last, c);
        if (walked + space.d(c, x1) > L + tol) continue;
        bool ok = true;
        for (int i = 0; i < j && ok; ++i) {
          double expected = static_cast<double>(j - i) / m * L;
          ok = std::abs(space.d(p.chain[i], c) - expected) <= tol;
        }
        if (!ok) continue;
        Partial q{p.chain, walked};
        q.chain.push_back(c);
        next.push_back(std::move(q));
        if (next.size() > options.budget)
          throw BudgetExceeded("geodesic enumeration for (" + space.id(x0) + "," + space.id(x1) +
                               ") exceeded " + std::to_string(options.budget) + " partial chains at step " +
                               std::to_string(j));
      }
    }
    layer = std::move(next);
  }

  std::vector<DiscreteGeodesic> out;
  out.reserve(layer.size());
  for (auto& p : layer) out.push_back(make_geodesic(space, std::move(p.chain)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GeodesicAtlas enumerate_atlas(const MetricMeasureSpace& space, const EnumerationOptions& options,
                              const std::vector<Index>* domain) {
  const std::vector<Index>& dom = domain ? *domain : space.support();
  GeodesicAtlas atlas(options.steps, AtlasProvenance::enumerated);
  for (Index a : dom)
    for (Index b : dom) {
      auto list = enumerate_geodesics(space, a, b, options);
      if (list.empty())
        throw AtlasError("no discrete geodesic from " + space.id(a) + " to " + space.id(b) +
                         " at this tolerance");
      atlas.set(a, b, std::move(list));
    }
  return atlas;
}

UniquenessReport uniqueness_report(const GeodesicAtlas& atlas, const MetricMeasureSpace& space) {
  UniquenessReport r;
  r.unique_pair_mass = 0;
  for (Index a : space.support())
    for (Index b : space.support()) {
      const auto& list = atlas.at(a, b);
      if (list.size() == 1)
        r.unique_pair_mass += space.nu(a) * space.nu(b);
      else
        r.ambiguous_pairs.push_back({a, b, list.size()});
    }
  return r;
}

}  // namespace cdkit
