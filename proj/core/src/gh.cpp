#include "cdkit/gh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cdkit/error.hpp"
#include "cdkit/parallel.hpp"

namespace cdkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_map(const PointMap& f, std::size_t source_size, std::size_t target_size) {
  if (f.size() != source_size) throw InputError("approximation map must be defined on every source point");
  for (Index x : f)
    if (x >= target_size) throw InputError("approximation map sends a point outside the target");
}

std::vector<Index> by_distance(const MetricMeasureSpace& X, Index from) {
  std::vector<Index> order(X.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return X.d(from, a) < X.d(from, b); });
  return order;
}

// W1 between two probability measures on X; the common part stays put at no
// cost, so only the excess masses go to the LP.
double w1_float(const MetricMeasureSpace& X, const ProbMeasure& a, const ProbMeasure& b) {
  std::vector<Rational> pa(X.size()), pb(X.size());
  Rational moved = 0;
  for (Index x = 0; x < X.size(); ++x) {
    Rational common = a[x] < b[x] ? a[x] : b[x];
    pa[x] = a[x] - common;
    pb[x] = b[x] - common;
    moved += pa[x];
  }
  if (moved == 0) return 0.0;
  for (Index x = 0; x < X.size(); ++x) {
    pa[x] /= moved;
    pb[x] /= moved;
  }
  TransportOptions opt;
  opt.mode = Arithmetic::floating;
  opt.rule = PivotRule::dantzig;
  return moved.get_d() * solve_w1(X, ProbMeasure(pa), ProbMeasure(pb), opt).distance;
}

}  // namespace

ApproximationReport validate_approximation(const PointMap& f, const MetricMeasureSpace& Y,
                                           const MetricMeasureSpace& X) {
  check_map(f, Y.size(), X.size());
  ApproximationReport r;
  for (Index a = 0; a < Y.size(); ++a)
    for (Index b = a + 1; b < Y.size(); ++b) {
      double dist = std::abs(X.d(f[a], f[b]) - Y.d(a, b));
      if (dist > r.distortion) {
        r.distortion = dist;
        r.distortion_y0 = a;
        r.distortion_y1 = b;
      }
    }
  for (Index x = 0; x < X.size(); ++x) {
    double nearest = kInf;
    for (Index y = 0; y < Y.size(); ++y) nearest = std::min(nearest, X.d(f[y], x));
    if (nearest > r.surjectivity) {
      r.surjectivity = nearest;
      r.surjectivity_x = x;
    }
  }
  r.epsilon_min = std::max(r.distortion, r.surjectivity);
  return r;
}

ProbMeasure pushforward(const PointMap& f, const ProbMeasure& mu, std::size_t target_size) {
  check_map(f, mu.size(), target_size);
  std::vector<Rational> w(target_size);
  for (Index y = 0; y < mu.size(); ++y) w[f[y]] += mu[y];
  return ProbMeasure(std::move(w));
}

LiftedGeodesic lift_geodesic(const PointMap& f, const DiscreteGeodesic& gamma, const MetricMeasureSpace& X,
                             const GeodesicAtlas& atlas) {
  if (atlas.pair_count() == 0) throw AtlasError("cannot lift into an empty atlas");
  if (gamma.steps() != atlas.steps())
    throw InputError("geodesic has " + std::to_string(gamma.steps()) + " steps but the target atlas has " +
                     std::to_string(atlas.steps()));
  std::vector<Index> image(gamma.chain.size());
  for (std::size_t j = 0; j < image.size(); ++j) {
    if (gamma.chain[j] >= f.size()) throw InputError("geodesic visits a point outside the map's domain");
    image[j] = f[gamma.chain[j]];
    if (image[j] >= X.size()) throw InputError("approximation map sends a point outside the target");
  }
  const auto starts = by_distance(X, image.front());
  const auto ends = by_distance(X, image.back());

  LiftedGeodesic out;
  out.source = gamma;
  out.distance = kInf;
  const DiscreteGeodesic* best = nullptr;
  for (Index a : starts) {
    if (X.d(a, image.front()) > out.distance) break;
    for (Index b : ends) {
      if (X.d(b, image.back()) > out.distance) break;
      if (!atlas.contains(a, b)) continue;
      for (const auto& cand : atlas.at(a, b)) {
        double sup = 0.0;
        for (std::size_t j = 0; j < image.size() && sup <= out.distance; ++j)
          sup = std::max(sup, X.d(cand.chain[j], image[j]));
        if (sup < out.distance || (sup == out.distance && best && cand < *best)) {
          out.distance = sup;
          best = &cand;
        }
      }
    }
  }
  if (!best) throw AtlasError("no atlas geodesic is available to lift onto");
  out.lifted = *best;
  return out;
}

double PlanTransportReport::max_time_w1() const {
  double m = 0.0;
  for (double v : time_w1) m = std::max(m, v);
  return m;
}

PlanTransportReport transport_plan(const PointMap& f, const DynamicalPlan& plan, const MetricMeasureSpace& X,
                                   const GeodesicAtlas& atlas) {
  check_map(f, plan.size(), X.size());
  PlanTransportReport r;
  std::vector<WeightedGeodesic> lifted;
  lifted.reserve(plan.geodesics().size());
  for (const auto& wg : plan.geodesics()) {
    auto l = lift_geodesic(f, wg.geodesic, X, atlas);
    r.max_lift_distance = std::max(r.max_lift_distance, l.distance);
    double w = wg.mass.get_d();
    r.endpoint_w1 += w * (X.d(f[wg.geodesic.start()], l.lifted.start()) + X.d(f[wg.geodesic.end()], l.lifted.end()));
    lifted.push_back({std::move(l.lifted), wg.mass});
  }
  r.lifted = DynamicalPlan(X.size(), plan.steps(), std::move(lifted));
  r.time_w1.assign(plan.steps() + 1, 0.0);
  parallel_for(r.time_w1.size(), [&](std::size_t j) {
    int jj = static_cast<int>(j);
    r.time_w1[j] = w1_float(X, pushforward(f, interpolate(plan, jj), X.size()), interpolate(r.lifted, jj));
  });
  return r;
}

BallDescriptor BallDescriptor::parse(std::string_view text) {
  BallDescriptor b;
  if (text == "all") {
    b.whole = true;
    return b;
  }
  auto comma = text.find(',');
  if (comma == std::string_view::npos) throw InputError("ball descriptor must be 'all' or 'center,radius'");
  std::string c(text.substr(0, comma)), r(text.substr(comma + 1));
  try {
    std::size_t used = 0;
    long long center = std::stoll(c, &used);
    if (used != c.size() || center < 0) throw InputError("bad ball center '" + c + "'");
    b.center = static_cast<Index>(center);
    b.radius = std::stod(r, &used);
    if (used != r.size()) throw InputError("bad ball radius '" + r + "'");
  } catch (const std::logic_error&) {
    throw InputError("ball descriptor must be 'all' or 'center,radius'");
  }
  if (!(b.radius > 0.0)) throw InputError("ball radius must be positive");
  return b;
}

std::string StabilityReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "level,points,epsilon,center,c_star,ambiguous_mass,closed_ball_differs,max_lift_distance,endpoint_w1,"
         "max_time_w1\n";
  for (const auto& l : levels)
    out << l.spec << ',' << l.points << ',' << l.epsilon << ',' << l.center << ',' << l.c_star << ','
        << to_string(l.ambiguous_mass) << ',' << (l.closed_ball_differs ? 1 : 0) << ',' << l.max_lift_distance << ','
        << l.endpoint_w1 << ',' << l.max_time_w1 << '\n';
  return out.str();
}

StabilityReport dm_stability_experiment(const std::vector<SpaceSpec>& levels, const SpaceSpec& target,
                                        const BallDescriptor& ball_desc, const StabilityOptions& options) {
  if (levels.empty()) throw InputError("stability experiment needs at least one level");
  if (options.steps < 1) throw InputError("stability experiment needs m >= 1");
  auto with_steps = [&](SpaceSpec s) {
    if (s.name != "file") s.params["m"] = std::to_string(options.steps);
    return s;
  };
  const SpaceSpec target_spec = with_steps(target);
  const GeneratedSpace X = generate(target_spec);
  if (!X.atlas) throw InputError("target space '" + target_spec.str() + "' has no geodesic atlas");
  if (!ball_desc.whole && ball_desc.center >= X.space.size()) throw InputError("ball center outside the target");

  StabilityReport rep;
  rep.target = target_spec.str();
  rep.ball = ball_desc;
  rep.steps = options.steps;
  rep.c_bound = options.c_bound;
  rep.required_decrease = options.required_decrease;
  rep.levels.resize(levels.size());

  parallel_for(levels.size(), [&](std::size_t i) {
    const SpaceSpec spec = with_steps(levels[i]);
    const GeneratedSpace Y = generate(spec);
    if (!Y.atlas) throw InputError("level '" + spec.str() + "' has no geodesic atlas");
    const PointMap f = nearest_point_map(Y, X);
    StabilityLevel& L = rep.levels[i];
    L.spec = spec.str();
    L.points = Y.space.size();
    L.epsilon = validate_approximation(f, Y.space, X.space).epsilon_min;
    Ball B;
    if (ball_desc.whole) {
      B = whole_space_ball(Y.space);
      L.center = B.center;
    } else {
      Index best = 0;
      for (Index y = 1; y < Y.space.size(); ++y)
        if (X.space.d(f[y], ball_desc.center) < X.space.d(f[best], ball_desc.center)) best = y;
      L.center = best;
      B = ball(Y.space, best, ball_desc.radius);
      L.closed_ball_differs = closed_ball(Y.space, best, ball_desc.radius).mass != B.mass;
    }
    DmOptions dm;
    dm.mode = options.mode;
    const DmCertificate cert = dm_optimal_constant(Y.space, B, *Y.atlas, dm);
    L.c_star = cert.c_star_value();
    L.ambiguous_mass = cert.ambiguous_mass;
    const PlanTransportReport t = transport_plan(f, cert.plan, X.space, *X.atlas);
    L.max_lift_distance = t.max_lift_distance;
    L.endpoint_w1 = t.endpoint_w1;
    L.max_time_w1 = t.max_time_w1();
  });

  rep.bounded = std::all_of(rep.levels.begin(), rep.levels.end(),
                            [&](const StabilityLevel& l) { return l.c_star <= rep.c_bound; });
  auto discrepancy = [](const StabilityLevel& l) { return std::max(l.endpoint_w1, l.max_time_w1); };
  double coarse = discrepancy(rep.levels.front()), fine = discrepancy(rep.levels.back());
  rep.w1_decrease = coarse > 0.0 ? 1.0 - fine / coarse : (fine == 0.0 ? 1.0 : 0.0);
  rep.decreasing = rep.w1_decrease >= rep.required_decrease;
  return rep;
}

}  // namespace cdkit
