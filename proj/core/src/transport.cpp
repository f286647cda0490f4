#include "cdkit/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "cdkit/error.hpp"

namespace cdkit {

ProbMeasure::ProbMeasure(std::vector<Rational> weights) : weights_(std::move(weights)) {
  Rational total = 0;
  for (Index i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 0) throw InputError("measure has a negative weight at point " + std::to_string(i));
    total += weights_[i];
  }
  if (std::abs(Rational(total - 1).get_d()) > kMassTolerance)
    throw InputError("measure has total mass " + std::to_string(total.get_d()) + ", expected 1");
}

ProbMeasure ProbMeasure::delta(std::size_t n, Index at) {
  if (at >= n) throw InputError("delta point " + std::to_string(at) + " out of range");
  std::vector<Rational> w(n, Rational(0));
  w[at] = 1;
  return ProbMeasure(std::move(w));
}

ProbMeasure ProbMeasure::restricted(const MetricMeasureSpace& space, const std::vector<Index>& set) {
  Rational mass = 0;
  for (Index i : set) mass += space.nu(i);
  if (mass <= 0) throw InputError("cannot restrict nu to a set of zero mass");
  std::vector<Rational> w(space.size(), Rational(0));
  for (Index i : set) w[i] = space.nu(i) / mass;
  return ProbMeasure(std::move(w));
}

ProbMeasure ProbMeasure::from_density(const MetricMeasureSpace& space, const std::vector<Rational>& rho) {
  if (rho.size() != space.size()) throw InputError("density has the wrong length");
  std::vector<Rational> w(space.size());
  Rational total = 0;
  for (Index i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0) throw InputError("density is negative at point " + std::to_string(i));
    w[i] = rho[i] * space.nu(i);
    total += w[i];
  }
  if (total != 1) throw InputError("density does not integrate to 1 against nu");
  return ProbMeasure(std::move(w));
}

std::vector<Index> ProbMeasure::support() const {
  std::vector<Index> s;
  for (Index i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0) s.push_back(i);
  return s;
}

namespace {

std::size_t parse_index(std::string_view s, std::size_t n, std::string_view what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError(std::string(what) + ": bad point index '" + std::string(s) + "'");
  if (v >= n) throw InputError(std::string(what) + ": point " + std::to_string(v) + " out of range");
  return v;
}

}  // namespace

ProbMeasure parse_measure(const MetricMeasureSpace& space, std::string_view text) {
  const std::size_t n = space.size();
  if (text == "uniform") {
    std::vector<Rational> w(n, Rational(0));
    Rational each(1, space.support().size());
    for (Index i : space.support()) w[i] = each;
    return ProbMeasure(std::move(w));
  }
  if (text == "nu") return ProbMeasure(space.measure());
  auto colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "delta") return ProbMeasure::delta(n, parse_index(arg, n, "delta"));
  if (kind == "ball") {
    auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw InputError("ball measure needs 'ball:i,r'");
    Index c = parse_index(arg.substr(0, comma), n, "ball");
    double r = 0;
    try {
      r = std::stod(std::string(arg.substr(comma + 1)));
    } catch (const std::exception&) {
      throw InputError("ball measure has a bad radius");
    }
    return ProbMeasure::restricted(space, ball(space, c, r).members);
  }
  if (kind == "density") {
    std::ifstream in{std::string(arg)};
    if (!in) throw InputError("cannot open density file '" + std::string(arg) + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw InputError("density file is not JSON: " + std::string(e.what()));
    }
    if (!j.is_array() || j.size() != n) throw InputError("density file must be an array of " + std::to_string(n) + " values");
    std::vector<Rational> rho(n);
    for (Index i = 0; i < n; ++i) {
      if (j[i].is_string()) rho[i] = parse_rational(j[i].get<std::string>());
      else if (j[i].is_number()) rho[i] = exact_rational(j[i].get<double>());
      else throw InputError("density entries must be numbers or rational strings");
    }
    Rational total = 0;
    for (Index i = 0; i < n; ++i) total += rho[i] * space.nu(i);
    if (total <= 0 || std::abs(Rational(total - 1).get_d()) > kMassTolerance)
      throw InputError("density does not integrate to 1 against nu");
    for (auto& r : rho) r /= total;
    return ProbMeasure::from_density(space, rho);
  }
  throw InputError("unknown measure descriptor '" + std::string(text) + "'");
}

LebesgueDecomposition lebesgue_decompose(const MetricMeasureSpace& space, const ProbMeasure& mu) {
  if (mu.size() != space.size()) throw InputError("measure and space sizes differ");
  LebesgueDecomposition d;
  d.density.assign(space.size(), Rational(0));
  d.singular_mass = 0;
  for (Index i = 0; i < space.size(); ++i) {
    if (space.in_support(i)) {
      d.density[i] = mu[i] / space.nu(i);
    } else if (mu[i] > 0) {
      d.singular_mass += mu[i];
      d.singular_points.push_back(i);
    }
  }
  return d;
}

TransferencePlan::TransferencePlan(std::size_t n, std::vector<PlanEntry> entries) : n_(n) {
  std::sort(entries.begin(), entries.end(),
            [](const PlanEntry& a, const PlanEntry& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  for (auto& e : entries) {
    if (e.from >= n || e.to >= n) throw InputError("plan entry out of range");
    if (e.mass < 0) throw InputError("plan entry has negative mass");
    if (!entries_.empty() && entries_.back().from == e.from && entries_.back().to == e.to)
      entries_.back().mass += e.mass;
    else
      entries_.push_back(std::move(e));
  }
  std::erase_if(entries_, [](const PlanEntry& e) { return e.mass == 0; });
}

Rational TransferencePlan::mass(Index from, Index to) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair(from, to),
                             [](const PlanEntry& e, const std::pair<Index, Index>& k) { return std::pair(e.from, e.to) < k; });
  if (it != entries_.end() && it->from == from && it->to == to) return it->mass;
  return 0;
}

ProbMeasure TransferencePlan::first_marginal() const {
  std::vector<Rational> w(n_, Rational(0));
  for (const auto& e : entries_) w[e.from] += e.mass;
  return ProbMeasure(std::move(w));
}

ProbMeasure TransferencePlan::second_marginal() const {
  std::vector<Rational> w(n_, Rational(0));
  for (const auto& e : entries_) w[e.to] += e.mass;
  return ProbMeasure(std::move(w));
}

double TransferencePlan::cost(const MetricMeasureSpace& space, int power) const {
  double c = 0.0;
  for (const auto& e : entries_) c += e.mass.get_d() * std::pow(space.d(e.from, e.to), power);
  return c;
}

TransferencePlan product_plan(const ProbMeasure& mu0, const ProbMeasure& mu1) {
  if (mu0.size() != mu1.size()) throw InputError("measures live on spaces of different sizes");
  std::vector<PlanEntry> e;
  for (Index a : mu0.support())
    for (Index b : mu1.support()) e.push_back({a, b, mu0[a] * mu1[b]});
  return TransferencePlan(mu0.size(), std::move(e));
}

TransferencePlan diagonal_plan(const ProbMeasure& mu) {
  std::vector<PlanEntry> e;
  for (Index a : mu.support()) e.push_back({a, a, mu[a]});
  return TransferencePlan(mu.size(), std::move(e));
}

namespace {

TransportResult solve_wp(const MetricMeasureSpace& space, const ProbMeasure& mu0, const ProbMeasure& mu1,
                         const TransportOptions& options, int power) {
  if (mu0.size() != space.size() || mu1.size() != space.size())
    throw InputError("measure and space sizes differ");
  const auto s0 = mu0.support();
  const auto s1 = mu1.support();
  LinearProgram lp;
  std::vector<PlanEntry> vars;
  for (Index a : s0)
    for (Index b : s1) {
      Rational c;
      if (options.mode == Arithmetic::exact) {
        Rational d = space.d_exact(a, b);
        c = power == 2 ? Rational(d * d) : d;
      } else {
        double d = space.d(a, b);
        c = exact_rational(power == 2 ? d * d : d);
      }
      lp.add_variable(c);
      vars.push_back({a, b, 0});
    }
  for (std::size_t ia = 0; ia < s0.size(); ++ia) {
    LinearConstraint row;
    for (std::size_t ib = 0; ib < s1.size(); ++ib) row.terms.push_back({ia * s1.size() + ib, 1});
    row.rhs = mu0[s0[ia]];
    lp.add_constraint(std::move(row));
  }
  for (std::size_t ib = 0; ib < s1.size(); ++ib) {
    LinearConstraint col;
    for (std::size_t ia = 0; ia < s0.size(); ++ia) col.terms.push_back({ia * s1.size() + ib, 1});
    col.rhs = mu1[s1[ib]];
    lp.add_constraint(std::move(col));
  }
  LpOptions lo;
  lo.mode = options.mode;
  lo.rule = options.rule;
  lo.nonzero_limit = std::max(kDefaultLpNonzeroLimit, lp.nonzeros());
  TransportResult r;
  r.certificate = solve_lp(lp, lo);
  if (r.certificate.status != LpStatus::optimal)
    throw NumericalError(std::string("transport LP ended ") + to_string(r.certificate.status));
  for (std::size_t k = 0; k < vars.size(); ++k) vars[k].mass = r.certificate.values[k];
  r.plan = TransferencePlan(space.size(), std::move(vars));
  r.cost = r.certificate.objective;
  double c = std::max(0.0, r.cost.get_d());
  r.distance = power == 2 ? std::sqrt(c) : c;
  return r;
}

}  // namespace

TransportResult solve_w2(const MetricMeasureSpace& space, const ProbMeasure& mu0, const ProbMeasure& mu1,
                         const TransportOptions& options) {
  return solve_wp(space, mu0, mu1, options, 2);
}

TransportResult solve_w1(const MetricMeasureSpace& space, const ProbMeasure& mu0, const ProbMeasure& mu1,
                         const TransportOptions& options) {
  return solve_wp(space, mu0, mu1, options, 1);
}

ConditionalKernel::ConditionalKernel(Side side, std::map<Index, std::vector<std::pair<Index, Rational>>> rows,
                                     std::vector<Rational> marginal)
    : side_(side), rows_(std::move(rows)), marginal_(std::move(marginal)) {}

const std::vector<std::pair<Index, Rational>>& ConditionalKernel::given(Index x) const {
  auto it = rows_.find(x);
  if (it == rows_.end())
    throw InputError("cannot condition on point " + std::to_string(x) + ": its marginal mass is zero");
  return it->second;
}

ConditionalKernel disintegrate(const TransferencePlan& plan, Side side) {
  std::vector<Rational> marginal(plan.size(), Rational(0));
  for (const auto& e : plan.entries()) marginal[side == Side::first ? e.from : e.to] += e.mass;
  std::map<Index, std::vector<std::pair<Index, Rational>>> rows;
  for (const auto& e : plan.entries()) {
    Index x = side == Side::first ? e.from : e.to;
    Index y = side == Side::first ? e.to : e.from;
    rows[x].push_back({y, e.mass / marginal[x]});
  }
  for (auto& [x, row] : rows) std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return ConditionalKernel(side, std::move(rows), std::move(marginal));
}

DynamicalPlan::DynamicalPlan(std::size_t n, int steps, std::vector<WeightedGeodesic> geodesics)
    : n_(n), steps_(steps) {
  std::sort(geodesics.begin(), geodesics.end(),
            [](const WeightedGeodesic& a, const WeightedGeodesic& b) { return a.geodesic < b.geodesic; });
  for (auto& wg : geodesics) {
    if (wg.geodesic.steps() != steps) throw InputError("geodesic step count differs from the plan's");
    if (wg.mass < 0) throw InputError("negative geodesic mass");
    for (Index p : wg.geodesic.chain)
      if (p >= n) throw InputError("geodesic leaves the space");
    if (wg.mass == 0) continue;
    if (!geodesics_.empty() && geodesics_.back().geodesic == wg.geodesic)
      geodesics_.back().mass += wg.mass;
    else
      geodesics_.push_back(std::move(wg));
  }
}

Rational DynamicalPlan::total_mass() const {
  Rational t = 0;
  for (const auto& g : geodesics_) t += g.mass;
  return t;
}

TransferencePlan DynamicalPlan::endpoint_plan() const {
  std::vector<PlanEntry> e;
  e.reserve(geodesics_.size());
  for (const auto& g : geodesics_) e.push_back({g.geodesic.start(), g.geodesic.end(), g.mass});
  return TransferencePlan(n_, std::move(e));
}

DynamicalPlan DynamicalPlan::reversed() const {
  std::vector<WeightedGeodesic> r;
  r.reserve(geodesics_.size());
  for (const auto& g : geodesics_) r.push_back({g.geodesic.reversed(), g.mass});
  return DynamicalPlan(n_, steps_, std::move(r));
}

DynamicalPlan lift_to_dynamical(const TransferencePlan& plan, const GeodesicAtlas& atlas, LiftSelection selection) {
  std::vector<WeightedGeodesic> out;
  for (const auto& e : plan.entries()) {
    const auto& list = atlas.at(e.from, e.to);
    if (selection == LiftSelection::canonical) {
      out.push_back({list.front(), e.mass});
    } else {
      Rational share = e.mass / static_cast<long>(list.size());
      for (const auto& g : list) out.push_back({g, share});
    }
  }
  return DynamicalPlan(plan.size(), atlas.steps(), std::move(out));
}

ProbMeasure interpolate(const DynamicalPlan& plan, int j) {
  if (j < 0 || j > plan.steps())
    throw InputError("grid index " + std::to_string(j) + " outside [0, " + std::to_string(plan.steps()) + "]");
  std::vector<Rational> w(plan.size(), Rational(0));
  for (const auto& g : plan.geodesics()) w[g.geodesic.chain[j]] += g.mass;
  return ProbMeasure(std::move(w));
}

DensityProfile density_profile(const DynamicalPlan& plan, const MetricMeasureSpace& space) {
  if (plan.size() != space.size()) throw InputError("plan and space sizes differ");
  const int m = plan.steps();
  DensityProfile p;
  p.density.assign(m + 1, std::vector<Rational>(space.size(), Rational(0)));
  p.singular_mass.assign(m + 1, Rational(0));
  for (const auto& g : plan.geodesics())
    for (int j = 0; j <= m; ++j) {
      Index x = g.geodesic.chain[j];
      if (space.in_support(x)) p.density[j][x] += g.mass;
      else p.singular_mass[j] += g.mass;
    }
  for (auto& row : p.density)
    for (Index x : space.support()) row[x] /= space.nu(x);
  return p;
}

std::vector<Rational> quadrature_weights(int steps, Quadrature rule) {
  if (steps < 1) throw InputError("m must be at least 1");
  std::vector<Rational> w(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    if (rule == Quadrature::uniform) w[j] = Rational(1, steps + 1);
    else w[j] = (j == 0 || j == steps) ? Rational(1, 2 * steps) : Rational(1, steps);
  }
  return w;
}

std::vector<Rational> occupation_measure(const DynamicalPlan& plan, Quadrature rule) {
  const auto w = quadrature_weights(plan.steps(), rule);
  std::vector<Rational> occ(plan.size(), Rational(0));
  for (const auto& g : plan.geodesics())
    for (int j = 0; j <= plan.steps(); ++j) occ[g.geodesic.chain[j]] += w[j] * g.mass;
  return occ;
}

}  // namespace cdkit
