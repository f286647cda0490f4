#include "cdkit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "cdkit/error.hpp"
#include "cdkit/io.hpp"

namespace cdkit {

SpaceSpec SpaceSpec::parse(std::string_view text) {
  SpaceSpec s;
  auto colon = text.find(':');
  s.name = std::string(text.substr(0, colon));
  if (s.name.empty()) throw InputError("empty space spec");
  if (colon == std::string_view::npos) return s;
  std::string_view rest = text.substr(colon + 1);
  if (s.name == "file") {
    if (rest.empty()) throw InputError("file: spec needs a path");
    s.path = std::string(rest);
    return s;
  }
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw InputError("expected key=value in space spec, got '" + std::string(item) + "'");
    s.params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return s;
}

std::string SpaceSpec::str() const {
  if (name == "file") return "file:" + path;
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep + k + "=" + v;
    sep = ',';
  }
  return out;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// round(a + j (b - a) / m) in exact integer arithmetic. Ties go toward the
// endpoint nearer in time, and up at the midpoint time, so that reversing
// the pair reverses the chain and diagonal steps stay along the segment.
long long snap(long long a, long long delta, int j, int m) {
  const long long v = a * m + static_cast<long long>(j) * delta;
  const long long fl = floor_div(v, m);
  const long long rem2 = 2 * (v - fl * m);
  if (rem2 < m) return fl;
  if (rem2 > m) return fl + 1;
  if (2 * j < m) return delta > 0 ? fl : fl + 1;
  if (2 * j > m) return delta > 0 ? fl + 1 : fl;
  return fl + 1;
}

class Params {
 public:
  Params(const SpaceSpec& spec, std::set<std::string> allowed) : spec_(spec) {
    allowed.insert("m");
    allowed.insert("atlas");
    for (const auto& [k, v] : spec.params)
      if (!allowed.count(k)) throw InputError("unknown parameter '" + k + "' for generator " + spec.name);
  }

  bool has(const std::string& key) const { return spec_.params.count(key) > 0; }

  long integer(const std::string& key, long fallback, long minimum) const {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) {
      if (fallback < minimum) throw InputError(spec_.name + " needs parameter " + key);
      return fallback;
    }
    long v = 0;
    try {
      std::size_t used = 0;
      v = std::stol(it->second, &used);
      if (used != it->second.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("parameter " + key + " must be an integer, got '" + it->second + "'");
    }
    if (v < minimum) throw InputError("parameter " + key + " must be at least " + std::to_string(minimum));
    return v;
  }

  Rational rational(const std::string& key, const Rational& fallback) const {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) return fallback;
    Rational q = parse_rational(it->second);
    if (q <= 0) throw InputError("parameter " + key + " must be positive");
    return q;
  }

  const std::string& raw(const std::string& key) const { return spec_.params.at(key); }

 private:
  const SpaceSpec& spec_;
};

std::vector<std::string> index_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return ids;
}

std::vector<Rational> uniform(std::size_t n) { return std::vector<Rational>(n, Rational(1, n)); }

std::vector<double> pairwise(const std::vector<std::vector<double>>& coords, ModelKind model) {
  const std::size_t n = coords.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = model_distance(model, coords[i], coords[j]);
  return d;
}

// Equispaced points on a line with exact spacing.
GeneratedSpace line_space(std::size_t n, const Rational& left, const Rational& spacing, std::vector<Rational> nu,
                          ModelKind model) {
  GeneratedSpace g;
  g.model = model;
  std::vector<Rational> exact(n * n);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    g.coords.push_back({Rational(left + spacing * static_cast<long>(i)).get_d()});
    for (std::size_t j = 0; j < n; ++j) {
      long gap = std::labs(static_cast<long>(i) - static_cast<long>(j));
      exact[i * n + j] = spacing * gap;
      dist[i * n + j] = exact[i * n + j].get_d();
    }
  }
  g.space = MetricMeasureSpace(index_ids(n), std::move(dist), std::move(nu), true, std::move(exact));
  return g;
}

GeneratedSpace make_interval(const Params& p) {
  std::size_t n = p.integer("n", 0, 2);
  Rational length = p.rational("length", 1);
  return line_space(n, 0, length / static_cast<long>(n - 1), uniform(n), ModelKind::interval);
}

GeneratedSpace make_gaussline(const Params& p) {
  std::size_t n = p.integer("n", 81, 2);
  Rational w = p.rational("half_width", 4);
  Rational spacing = 2 * w / static_cast<long>(n - 1);
  std::vector<Rational> nu(n);
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = Rational(-w + spacing * static_cast<long>(i)).get_d();
    nu[i] = exact_rational(std::exp(-0.5 * x * x));
    total += nu[i];
  }
  for (auto& q : nu) q /= total;
  return line_space(n, -w, spacing, std::move(nu), ModelKind::gaussian_line);
}

GeneratedSpace make_circle(const Params& p) {
  std::size_t n = p.integer("n", 0, 2);
  GeneratedSpace g;
  g.model = ModelKind::circle;
  for (std::size_t k = 0; k < n; ++k) g.coords.push_back({2.0 * std::numbers::pi * static_cast<double>(k) / n});
  // Arc lengths from index gaps rather than from the angles, so that equal
  // gaps give bitwise-equal distances.
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t gap = i > j ? i - j : j - i;
      gap = std::min(gap, n - gap);
      d[i * n + j] = 2.0 * std::numbers::pi * static_cast<double>(gap) / n;
    }
  g.space = MetricMeasureSpace(index_ids(n), std::move(d), uniform(n), true);
  return g;
}

GeneratedSpace make_sphere(const Params& p) {
  std::size_t n = p.integer("n", 0, 2);
  GeneratedSpace g;
  g.model = ModelKind::sphere;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    double z = 1.0 - (2.0 * k + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * static_cast<double>(k);
    g.coords.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  g.space = MetricMeasureSpace(index_ids(n), pairwise(g.coords, g.model), uniform(n), true);
  return g;
}

GeneratedSpace make_grid(const Params& p) {
  long fallback = p.has("n") ? p.integer("n", 0, 2) : 0;
  std::size_t nx = p.integer("nx", fallback, 2);
  std::size_t ny = p.integer("ny", fallback, 2);
  GeneratedSpace g;
  g.model = ModelKind::grid;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      g.coords.push_back({static_cast<double>(i) / (nx - 1), static_cast<double>(j) / (ny - 1)});
      ids.push_back(std::to_string(i) + "," + std::to_string(j));
    }
  g.space = MetricMeasureSpace(std::move(ids), pairwise(g.coords, g.model), uniform(nx * ny), true);
  return g;
}

GeneratedSpace make_graph(const Params& p) {
  if (!p.has("edges")) throw InputError("graph needs edges=a-b[:w];...");
  struct Edge {
    std::size_t a, b;
    Rational w;
  };
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::stringstream ss(p.raw("edges"));
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash == std::string::npos) throw InputError("edge '" + item + "' is not of the form a-b[:w]");
    auto colon = item.find(':', dash);
    Edge e{};
    try {
      e.a = std::stoul(item.substr(0, dash));
      e.b = std::stoul(item.substr(dash + 1, colon == std::string::npos ? std::string::npos : colon - dash - 1));
    } catch (const std::exception&) {
      throw InputError("edge '" + item + "' has a bad endpoint");
    }
    e.w = colon == std::string::npos ? Rational(1) : parse_rational(item.substr(colon + 1));
    if (e.w <= 0) throw InputError("edge weights must be positive");
    if (e.a == e.b) throw InputError("self-loop in edge '" + item + "'");
    n = std::max({n, e.a + 1, e.b + 1});
    edges.push_back(e);
  }
  if (p.has("n")) n = std::max<std::size_t>(n, p.integer("n", 0, 1));
  if (n == 0) throw InputError("graph has no vertices");

  std::vector<std::optional<Rational>> D(n * n);
  for (std::size_t i = 0; i < n; ++i) D[i * n + i] = Rational(0);
  for (const auto& e : edges) {
    auto& ab = D[e.a * n + e.b];
    if (!ab || e.w < *ab) ab = e.w;
    D[e.b * n + e.a] = ab;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!D[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!D[k * n + j]) continue;
        Rational via = *D[i * n + k] + *D[k * n + j];
        auto& ij = D[i * n + j];
        if (!ij || via < *ij) ij = via;
      }
    }
  std::vector<Rational> exact(n * n);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (!D[i]) throw InputError("graph is disconnected");
    exact[i] = *D[i];
    dist[i] = exact[i].get_d();
  }
  GeneratedSpace g;
  g.model = ModelKind::graph;
  g.space = MetricMeasureSpace(index_ids(n), std::move(dist), uniform(n), true, std::move(exact));
  return g;
}

}  // namespace

GeneratedSpace generate(const SpaceSpec& spec) {
  if (spec.name == "file") return load_space_file(spec.path);

  GeneratedSpace g;
  bool atlas_default = true;
  std::unique_ptr<Params> params;
  if (spec.name == "interval") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"n", "length"});
    g = make_interval(*params);
  } else if (spec.name == "circle") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"n"});
    g = make_circle(*params);
  } else if (spec.name == "sphere") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"n"});
    g = make_sphere(*params);
    atlas_default = false;
  } else if (spec.name == "grid") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"n", "nx", "ny"});
    g = make_grid(*params);
  } else if (spec.name == "gaussline") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"n", "half_width"});
    g = make_gaussline(*params);
  } else if (spec.name == "graph") {
    params = std::make_unique<Params>(spec, std::set<std::string>{"edges", "n"});
    g = make_graph(*params);
    atlas_default = false;
  } else {
    throw InputError("unknown generator '" + spec.name + "'");
  }

  bool want_atlas = params->integer("atlas", atlas_default ? 1 : 0, 0) != 0;
  if (want_atlas) {
    if (g.model == ModelKind::graph) throw InputError("graph spaces have no analytic atlas");
    g.atlas = analytic_atlas(g, static_cast<int>(params->integer("m", kDefaultSteps, 1)));
  }
  return g;
}

GeneratedSpace generate(std::string_view spec_text) { return generate(SpaceSpec::parse(spec_text)); }

double model_distance(ModelKind model, const std::vector<double>& a, const std::vector<double>& b) {
  switch (model) {
    case ModelKind::interval:
    case ModelKind::gaussian_line: return std::abs(a.at(0) - b.at(0));
    case ModelKind::circle: {
      double gap = std::fmod(std::abs(a.at(0) - b.at(0)), 2.0 * std::numbers::pi);
      return std::min(gap, 2.0 * std::numbers::pi - gap);
    }
    case ModelKind::grid: return std::hypot(a.at(0) - b.at(0), a.at(1) - b.at(1));
    case ModelKind::sphere: {
      double dot = a.at(0) * b.at(0) + a.at(1) * b.at(1) + a.at(2) * b.at(2);
      return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    default: break;
  }
  throw InputError("model has no continuum distance");
}

namespace {

GeodesicAtlas line_atlas(const GeneratedSpace& g, int m) {
  const long long n = static_cast<long long>(g.space.size());
  GeodesicAtlas atlas(m, AtlasProvenance::analytic);
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) {
      std::vector<Index> chain;
      for (int j = 0; j <= m; ++j) chain.push_back(static_cast<Index>(snap(a, b - a, j, m)));
      atlas.set(a, b, {make_geodesic(g.space, std::move(chain))});
    }
  return atlas;
}

GeodesicAtlas circle_atlas(const GeneratedSpace& g, int m) {
  const long long n = static_cast<long long>(g.space.size());
  GeodesicAtlas atlas(m, AtlasProvenance::analytic);
  auto arc = [&](long long a, long long delta) {
    std::vector<Index> chain;
    for (int j = 0; j <= m; ++j) chain.push_back(static_cast<Index>(((snap(a, delta, j, m) % n) + n) % n));
    return make_geodesic(g.space, std::move(chain));
  };
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) {
      long long gap = ((b - a) % n + n) % n;
      std::vector<DiscreteGeodesic> list;
      if (2 * gap <= n) list.push_back(arc(a, gap));
      if (2 * gap >= n && gap != 0) list.push_back(arc(a, gap - n));
      atlas.set(a, b, std::move(list));
    }
  return atlas;
}

GeodesicAtlas grid_atlas(const GeneratedSpace& g, int m) {
  // Coordinates are recovered from ids "i,j".
  const std::size_t n = g.space.size();
  std::vector<std::pair<long long, long long>> ij(n);
  long long ny = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string& id = g.space.id(k);
    auto comma = id.find(',');
    ij[k] = {std::stoll(id.substr(0, comma)), std::stoll(id.substr(comma + 1))};
    ny = std::max(ny, ij[k].second + 1);
  }
  GeodesicAtlas atlas(m, AtlasProvenance::analytic);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<Index> chain;
      for (int j = 0; j <= m; ++j) {
        long long x = snap(ij[a].first, ij[b].first - ij[a].first, j, m);
        long long y = snap(ij[a].second, ij[b].second - ij[a].second, j, m);
        chain.push_back(static_cast<Index>(x * ny + y));
      }
      atlas.set(a, b, {make_geodesic(g.space, std::move(chain))});
    }
  return atlas;
}

Index nearest(const GeneratedSpace& g, const std::vector<double>& c) {
  Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < g.coords.size(); ++k) {
    // Equidistant candidates would otherwise be split by rounding noise in
    // the coordinates; keep the lowest index.
    double d = model_distance(g.model, g.coords[k], c);
    if (k == 0 || d < best_d - 1e-12 * (1.0 + best_d)) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

GeodesicAtlas sphere_atlas(const GeneratedSpace& g, int m) {
  const std::size_t n = g.space.size();
  GeodesicAtlas atlas(m, AtlasProvenance::analytic);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& pa = g.coords[a];
      const auto& pb = g.coords[b];
      double theta = g.space.d(a, b);
      std::vector<Index> chain{a};
      for (int j = 1; j < m; ++j) {
        double t = static_cast<double>(j) / m;
        std::vector<double> c(3);
        if (std::sin(theta) < 1e-12) {
          c = theta < 1.0 ? pa : pb;  // coincident or antipodal: no unique great circle
        } else {
          double wa = std::sin((1 - t) * theta) / std::sin(theta);
          double wb = std::sin(t * theta) / std::sin(theta);
          for (int k = 0; k < 3; ++k) c[k] = wa * pa[k] + wb * pb[k];
        }
        chain.push_back(nearest(g, c));
      }
      chain.push_back(b);
      if (a == b) chain.assign(static_cast<std::size_t>(m) + 1, a);
      atlas.set(a, b, {make_geodesic(g.space, std::move(chain))});
    }
  return atlas;
}

}  // namespace

GeodesicAtlas analytic_atlas(const GeneratedSpace& g, int steps) {
  if (steps < 1) throw InputError("m must be at least 1");
  switch (g.model) {
    case ModelKind::interval:
    case ModelKind::gaussian_line: return line_atlas(g, steps);
    case ModelKind::circle: return circle_atlas(g, steps);
    case ModelKind::grid: return grid_atlas(g, steps);
    case ModelKind::sphere: return sphere_atlas(g, steps);
    default: break;
  }
  throw InputError("this space has no analytic atlas");
}

std::vector<Index> nearest_point_map(const GeneratedSpace& from, const GeneratedSpace& to) {
  if (from.model != to.model || from.model == ModelKind::none || from.model == ModelKind::graph)
    throw InputError("nearest-point maps need two generated spaces of the same model");
  std::vector<Index> f(from.coords.size());
  for (Index y = 0; y < f.size(); ++y) f[y] = nearest(to, from.coords[y]);
  return f;
}

}  // namespace cdkit
