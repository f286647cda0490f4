#include "cdkit/batteries.hpp"

#include <cmath>

namespace cdkit {

std::vector<std::vector<double>> coordinate_fields(const GeneratedSpace& g) {
  std::vector<std::vector<double>> out;
  if (g.coords.empty()) return out;
  const std::size_t dims = g.coords.front().size();
  if (g.model == ModelKind::circle) {
    std::vector<double> c, s;
    for (const auto& p : g.coords) {
      c.push_back(std::cos(p[0]));
      s.push_back(std::sin(p[0]));
    }
    out.push_back(std::move(c));
    out.push_back(std::move(s));
    return out;
  }
  for (std::size_t k = 0; k < dims; ++k) {
    std::vector<double> f;
    for (const auto& p : g.coords) f.push_back(p[k]);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::vector<double>> distance_fields(const MetricMeasureSpace& space, std::size_t anchors) {
  std::vector<std::vector<double>> out;
  const auto& supp = space.support();
  const std::size_t count = std::min(anchors, supp.size());
  for (std::size_t a = 0; a < count; ++a) {
    Index p = supp[a * supp.size() / count];
    std::vector<double> f(space.size());
    for (Index x = 0; x < space.size(); ++x) f[x] = space.d(p, x);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::vector<double>> field_battery(const GeneratedSpace& g) {
  auto out = coordinate_fields(g);
  for (auto& f : distance_fields(g.space, 4)) out.push_back(std::move(f));
  return out;
}

std::vector<double> radius_ladder(const MetricMeasureSpace& space) {
  std::vector<double> radii;
  const double diam = space.support_diameter();
  for (double r = 1.5 * space.mesh(); r > 0.0 && r < diam; r *= 2.0) radii.push_back(r);
  radii.push_back(diam + 1.0);
  return radii;
}

std::vector<Ball> ball_family(const MetricMeasureSpace& space, const std::vector<double>& radii) {
  std::vector<Ball> out;
  for (Index c : space.support())
    for (double r : radii) out.push_back(ball(space, c, r));
  return out;
}

}  // namespace cdkit
