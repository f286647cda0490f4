#include "cdkit/democratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdkit/error.hpp"
#include "cdkit/parallel.hpp"

namespace cdkit {

DynamicalPlan build_democratic_unique(const ProbMeasure& mu, const GeodesicAtlas& atlas) {
  std::vector<WeightedGeodesic> out;
  const auto supp = mu.support();
  for (Index a : supp)
    for (Index b : supp) {
      const auto& list = atlas.at(a, b);
      if (list.size() != 1)
        throw AtlasError("pair (" + std::to_string(a) + "," + std::to_string(b) + ") has " +
                         std::to_string(list.size()) + " geodesics; the selection map needs exactly one");
      out.push_back({list.front(), mu[a] * mu[b]});
    }
  return DynamicalPlan(mu.size(), atlas.steps(), std::move(out));
}

namespace {

// max_x occ(x) nu[B] / nu(x) over supp(nu), lowest index on ties.
std::pair<Rational, Index> occupation_ratio(const MetricMeasureSpace& space, const std::vector<Rational>& occ,
                                            const Rational& ball_mass) {
  Rational best = 0;
  Index arg = space.support().front();
  bool first = true;
  for (Index x : space.support()) {
    Rational r = occ[x] * ball_mass / space.nu(x);
    if (first || r > best) {
      best = r;
      arg = x;
      first = false;
    }
  }
  return {best, arg};
}

}  // namespace

DmCertificate dm_optimal_constant(const MetricMeasureSpace& space, const Ball& B, const GeodesicAtlas& atlas,
                                  const DmOptions& options) {
  if (B.mass <= 0) throw InputError("ball around " + space.id(B.center) + " has zero mass");
  const int m = atlas.steps();
  const auto w = quadrature_weights(m, options.quadrature);
  ProbMeasure mu = ProbMeasure::restricted(space, B.members);
  const auto supp = mu.support();
  const std::size_t n = space.size();

  DmCertificate cert;
  cert.ball = B;
  cert.mu = mu;
  cert.quadrature = options.quadrature;
  cert.mode = options.mode;
  cert.steps = m;
  cert.ambiguous_mass = 0;

  std::vector<WeightedGeodesic> fixed;
  std::vector<Rational> fixed_occ(n, Rational(0));
  struct Group {
    Rational mass;
    std::vector<const DiscreteGeodesic*> chains;
  };
  std::vector<Group> groups;

  auto visits_null = [&](const DiscreteGeodesic& g) {
    return std::any_of(g.chain.begin(), g.chain.end(), [&](Index p) { return !space.in_support(p); });
  };

  for (Index a : supp)
    for (Index b : supp) {
      Rational mass = mu[a] * mu[b];
      const auto& list = atlas.at(a, b);
      std::vector<const DiscreteGeodesic*> usable;
      for (const auto& g : list)
        if (!visits_null(g)) usable.push_back(&g);
      if (usable.empty())
        throw NumericalError("every geodesic of pair (" + space.id(a) + "," + space.id(b) +
                             ") visits a nu-null point; no democratic plan has finite constant");
      if (list.size() > 1) cert.ambiguous_mass += mass;
      if (usable.size() == 1) {
        fixed.push_back({*usable.front(), mass});
        for (int j = 0; j <= m; ++j) fixed_occ[usable.front()->chain[j]] += w[j] * mass;
      } else {
        groups.push_back({mass, std::move(usable)});
      }
    }

  std::vector<WeightedGeodesic> plan_geodesics = fixed;

  if (groups.empty()) {
    cert.lp_variables = 0;
    cert.lp_rows = 0;
  } else {
    LinearProgram lp;
    const std::size_t c_var = lp.add_variable(1);
    std::vector<std::pair<const DiscreteGeodesic*, std::size_t>> vars;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> occ_terms(n);
    for (const auto& grp : groups) {
      LinearConstraint pair_row;
      pair_row.relation = Relation::equal;
      pair_row.rhs = grp.mass;
      for (const auto* g : grp.chains) {
        std::size_t v = lp.add_variable(0);
        vars.push_back({g, v});
        pair_row.terms.push_back({v, 1});
        std::vector<Rational> coef(n, Rational(0));
        for (int j = 0; j <= m; ++j) coef[g->chain[j]] += w[j];
        for (Index x = 0; x < n; ++x)
          if (coef[x] != 0) occ_terms[x].push_back({v, coef[x]});
      }
      lp.add_constraint(std::move(pair_row));
    }
    for (Index x : space.support()) {
      if (occ_terms[x].empty() && fixed_occ[x] == 0) continue;
      LinearConstraint row;
      row.relation = Relation::less_equal;
      row.terms = std::move(occ_terms[x]);
      row.terms.push_back({c_var, -space.nu(x) / B.mass});
      row.rhs = -fixed_occ[x];
      lp.add_constraint(std::move(row));
    }
    cert.lp_variables = lp.variable_count;
    cert.lp_rows = lp.constraints.size();

    LpOptions lo;
    lo.mode = options.mode;
    lo.rule = options.mode == Arithmetic::exact ? PivotRule::bland : PivotRule::dantzig;
    LpSolution sol = solve_lp(lp, lo);
    if (sol.status != LpStatus::optimal)
      throw NumericalError(std::string("democratic LP ended ") + to_string(sol.status));
    cert.lp_objective = sol.objective_value();
    for (const auto& [g, v] : vars)
      if (sol.values[v] > 0) plan_geodesics.push_back({*g, sol.values[v]});
  }

  cert.plan = DynamicalPlan(n, m, std::move(plan_geodesics));
  cert.occupation = occupation_measure(cert.plan, options.quadrature);
  for (Index x = 0; x < n; ++x)
    if (!space.in_support(x) && cert.occupation[x] > 0)
      throw NumericalError("democratic plan occupies the nu-null point " + space.id(x));
  auto [c, arg] = occupation_ratio(space, cert.occupation, B.mass);
  cert.c_star = c;
  cert.argmax = arg;
  if (groups.empty()) cert.lp_objective = c.get_d();
  return cert;
}

DmVerification verify_dm(const MetricMeasureSpace& space, const Rational& constant, const std::vector<Ball>& balls,
                         const GeodesicAtlas& atlas, const DmOptions& options) {
  DmVerification v;
  v.constant = constant.get_d();
  v.balls.resize(balls.size());
  std::vector<Rational> exact(balls.size());
  parallel_for(balls.size(), [&](std::size_t i) {
    DmCertificate cert = dm_optimal_constant(space, balls[i], atlas, options);
    exact[i] = cert.c_star;
    v.balls[i] = {balls[i], cert.c_star.get_d(), cert.c_star <= constant};
  });
  v.passed = true;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    v.passed = v.passed && v.balls[i].passed;
    if (exact[i] > exact[v.worst]) v.worst = i;
  }
  return v;
}

namespace {

double time_factor(double t, double exponent) {
  // min(t^-e, (1-t)^-e), with the endpoint values 1 taken exactly.
  if (t <= 0.0 || t >= 1.0) return 1.0;
  return std::min(std::pow(t, -exponent), std::pow(1.0 - t, -exponent));
}

}  // namespace

DensityBoundReport density_bound_check(const DynamicalPlan& plan, const MetricMeasureSpace& space, double N,
                                       const Rational& ball_mass, double slack) {
  if (ball_mass <= 0) throw InputError("ball mass must be positive");
  DensityBoundReport r;
  r.dimension = N;
  r.slack = slack;
  r.passed = true;
  const auto profile = density_profile(plan, space);
  const int m = plan.steps();
  for (int j = 0; j <= m; ++j) {
    DensityBoundRow row;
    row.j = j;
    row.t = static_cast<double>(j) / m;
    Rational best = 0;
    for (Index x : space.support()) best = std::max(best, profile.density[j][x]);
    row.max_density = profile.singular_mass[j] > 0 ? std::numeric_limits<double>::infinity() : best.get_d();
    row.threshold = time_factor(row.t, N) / ball_mass.get_d();
    row.margin = row.threshold * (1.0 + slack) - row.max_density;
    row.passed = row.margin >= -1e-12 * row.threshold;
    r.passed = r.passed && row.passed;
    r.rows.push_back(row);
  }
  return r;
}

LpNormReport lp_density_bound_check(const DynamicalPlan& plan, const MetricMeasureSpace& space,
                                    const std::vector<Rational>& rho, double p, double N, double slack) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("the exponent p must lie in (1, inf)");
  if (rho.size() != space.size()) throw InputError("density has the wrong length");
  const int m = plan.steps();
  auto endpoint_error = [&](int j) {
    ProbMeasure muj = interpolate(plan, j);
    double worst = 0.0;
    for (Index x = 0; x < space.size(); ++x)
      worst = std::max(worst, std::abs(Rational(muj[x] - rho[x] * space.nu(x)).get_d()));
    return worst;
  };
  if (endpoint_error(0) > kMassTolerance || endpoint_error(m) > kMassTolerance)
    throw InputError("the plan does not couple rho nu to itself");

  auto norm = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (Index x : space.support()) s += space.nu_value(x) * std::pow(f[x], p);
    return std::pow(s, 1.0 / p);
  };
  LpNormReport r;
  r.exponent = p;
  r.dimension = N;
  r.slack = slack;
  r.base_norm = norm(to_doubles(rho));
  r.passed = true;
  const double conj = p / (p - 1.0);
  const auto profile = density_profile(plan, space);
  for (int j = 0; j <= m; ++j) {
    LpNormRow row;
    row.j = j;
    row.t = static_cast<double>(j) / m;
    row.norm = profile.singular_mass[j] > 0 ? std::numeric_limits<double>::infinity() : norm(to_doubles(profile.density[j]));
    row.bound = time_factor(row.t, N / conj) * r.base_norm;
    row.margin = row.bound * (1.0 + slack) - row.norm;
    row.passed = row.margin >= -1e-12 * std::max(1.0, row.bound);
    r.passed = r.passed && row.passed;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace cdkit
