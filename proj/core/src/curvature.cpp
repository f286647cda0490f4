#include "cdkit/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cdkit/error.hpp"
#include "cdkit/parallel.hpp"

namespace cdkit {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_infinite_dim(double N) { return std::isinf(N); }

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void CurvatureParams::check() const {
  if (!std::isfinite(K)) throw InputError("K must be finite");
  if (!(N >= 1.0)) throw InputError("N must lie in [1, inf]");
}

double alpha(double K, double N, double d) {
  if (!(N > 1.0)) throw InputError("alpha needs N > 1");
  if (is_infinite_dim(N)) return 0.0;
  return std::sqrt(std::abs(K) / (N - 1.0)) * d;
}

double beta(double K, double N, double t, double d) {
  if (t < 0.0 || t > 1.0) throw InputError("t must lie in [0, 1]");
  if (d < 0.0) throw InputError("d must be nonnegative");
  if (is_infinite_dim(N)) return std::exp(K * (1.0 - t * t) * d * d / 6.0);
  if (N == 1.0) return K > 0 ? kInfinity : 1.0;
  if (N < 1.0) throw InputError("N must be at least 1");
  if (K == 0.0) return 1.0;
  const double a = alpha(K, N, d);
  if (K > 0) {
    if (a > kPi) return kInfinity;
    if (t == 1.0 || a == 0.0) return 1.0;
    if (a == kPi) return kInfinity;
    double ratio = t == 0.0 ? a / std::sin(a) : std::sin(t * a) / (t * std::sin(a));
    return std::pow(ratio, N - 1.0);
  }
  if (t == 1.0 || a == 0.0) return 1.0;
  double ratio = t == 0.0 ? a / std::sinh(a) : std::sinh(t * a) / (t * std::sinh(a));
  return std::pow(ratio, N - 1.0);
}

double tau(double K, double N, double t, double d) {
  if (t < 0.0 || t > 1.0) throw InputError("t must lie in [0, 1]");
  if (d < 0.0) throw InputError("d must be nonnegative");
  if (K == 0.0 || N == 1.0) return t;
  if (is_infinite_dim(N)) throw InputError("tau is defined for finite N only");
  if (N < 1.0) throw InputError("N must be at least 1");
  const double a = alpha(K, N, d);
  if (K > 0 && a > kPi) return kInfinity;
  if (t == 0.0) return 0.0;
  if (t == 1.0 || a == 0.0) return t;
  if (K > 0 && a == kPi) return kInfinity;
  double ratio = K > 0 ? std::sin(t * a) / std::sin(a) : std::sinh(t * a) / std::sinh(a);
  return std::pow(t, 1.0 / N) * std::pow(ratio, 1.0 - 1.0 / N);
}

EntropyFunctional::EntropyFunctional(std::string name, std::function<double(double)> u, double slope_at_infinity,
                                     double slope_at_zero)
    : name_(std::move(name)), u_(std::move(u)), slope_inf_(slope_at_infinity), slope_zero_(slope_at_zero) {}

EntropyFunctional EntropyFunctional::sturm(double N) {
  if (!(N > 1.0) || !std::isfinite(N)) throw InputError("U_N needs 1 < N < inf");
  return EntropyFunctional(
      "UN:N=" + format_number(N), [N](double r) { return r <= 0.0 ? 0.0 : N * r - N * std::pow(r, 1.0 - 1.0 / N); }, N,
      -kInfinity);
}

EntropyFunctional EntropyFunctional::boltzmann() {
  return EntropyFunctional("Uinfty", [](double r) { return r <= 0.0 ? 0.0 : r * std::log(r); }, kInfinity, -kInfinity);
}

EntropyFunctional EntropyFunctional::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("power functional needs 1 < p < inf");
  return EntropyFunctional(
      "power:p=" + format_number(p), [p](double r) { return r <= 0.0 ? 0.0 : (std::pow(r, p) - r) / (p - 1.0); },
      kInfinity, -1.0 / (p - 1.0));
}

EntropyFunctional EntropyFunctional::linear(double c) {
  if (!std::isfinite(c)) throw InputError("linear functional needs a finite slope");
  return EntropyFunctional("linear:c=" + format_number(c), [c](double r) { return c * r; }, c, c);
}

double EntropyFunctional::operator()(double r) const { return u_(r); }

double EntropyFunctional::psi(double lambda, double N) const {
  if (is_infinite_dim(N)) return std::exp(lambda) * u_(std::exp(-lambda));
  if (!(lambda > 0.0)) throw InputError("psi needs lambda > 0 for finite N");
  return std::pow(lambda, N) * u_(std::pow(lambda, -N));
}

EntropyFunctional functional_by_name(std::string_view name) {
  auto colon = name.find(':');
  std::string_view kind = name.substr(0, colon);
  auto param = [&](std::string_view key) -> double {
    if (colon == std::string_view::npos) throw InputError("functional '" + std::string(name) + "' needs a parameter");
    std::string_view rest = name.substr(colon + 1);
    if (rest.substr(0, key.size()) != key || rest.size() <= key.size() || rest[key.size()] != '=')
      throw InputError("functional '" + std::string(name) + "' expects " + std::string(key) + "=<value>");
    std::string value(rest.substr(key.size() + 1));
    if (value == "inf") return kInfinity;
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw InputError("");
      return v;
    } catch (const std::exception&) {
      throw InputError("bad parameter value in functional '" + std::string(name) + "'");
    }
  };
  if (kind == "UN") return EntropyFunctional::sturm(param("N"));
  if (kind == "Uinfty") return EntropyFunctional::boltzmann();
  if (kind == "power") return EntropyFunctional::power(param("p"));
  if (kind == "linear") return EntropyFunctional::linear(param("c"));
  throw InputError("unknown functional '" + std::string(name) + "'");
}

namespace {

// Largest violation of convexity (negative = convex) and of monotone
// decrease along sampled (x, y) pairs, both scaled by the slope sizes.
struct ShapeDefects {
  double convexity = 0.0;
  double convexity_at = 0.0;
  double increase = 0.0;
  double increase_at = 0.0;
};

ShapeDefects shape_defects(const std::vector<double>& x, const std::vector<double>& y) {
  ShapeDefects s;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    double s0 = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    double s1 = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    double drop = (s0 - s1) / (1.0 + std::abs(s0) + std::abs(s1));
    if (drop > s.convexity) {
      s.convexity = drop;
      s.convexity_at = x[i];
    }
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    double rise = (y[i] - y[i - 1]) / (1.0 + std::abs(y[i]) + std::abs(y[i - 1]));
    if (rise > s.increase) {
      s.increase = rise;
      s.increase_at = x[i];
    }
  }
  return s;
}

}  // namespace

DcMembership dc_membership(const EntropyFunctional& U, double N) {
  DcMembership m;
  if (!(N >= 1.0)) throw InputError("N must lie in [1, inf]");
  if (std::abs(U(0.0)) > kDcTolerance) {
    m.reason = "U(0) != 0";
    m.defect = std::abs(U(0.0));
    return m;
  }
  std::vector<double> r(kDcSamples), ur(kDcSamples);
  for (int i = 0; i < kDcSamples; ++i) {
    r[i] = std::pow(10.0, -6.0 + 12.0 * i / (kDcSamples - 1));
    ur[i] = U(r[i]);
  }
  // U is convex on [0, inf): include 0 as the first sample.
  r.insert(r.begin(), 0.0);
  ur.insert(ur.begin(), 0.0);
  ShapeDefects su = shape_defects(r, ur);
  if (su.convexity > kDcTolerance) {
    m.reason = "U is not convex";
    m.witness = su.convexity_at;
    m.defect = -su.convexity;
    return m;
  }

  std::vector<double> lam(kDcSamples), psi(kDcSamples);
  for (int i = 0; i < kDcSamples; ++i) {
    double s = static_cast<double>(i) / (kDcSamples - 1);
    lam[i] = is_infinite_dim(N) ? -30.0 + 60.0 * s : std::pow(10.0, -2.0 + 4.0 * s);
    psi[i] = U.psi(lam[i], N);
  }
  ShapeDefects sp = shape_defects(lam, psi);
  m.defect = -sp.convexity;
  if (sp.convexity > kDcTolerance) {
    m.reason = "psi is not convex";
    m.witness = sp.convexity_at;
    return m;
  }
  if (sp.increase > kDcTolerance) {
    m.reason = "psi is not nonincreasing";
    m.witness = sp.increase_at;
    m.defect = -sp.increase;
    return m;
  }
  m.passed = true;
  return m;
}

double entropy(const EntropyFunctional& U, const ProbMeasure& mu, const MetricMeasureSpace& space) {
  auto dec = lebesgue_decompose(space, mu);
  double total = 0.0;
  for (Index x : space.support()) total += space.nu_value(x) * U(dec.density[x].get_d());
  if (dec.singular_mass > 0) {
    if (std::isinf(U.slope_at_infinity())) return kInfinity;
    total += U.slope_at_infinity() * dec.singular_mass.get_d();
  }
  return total;
}

double sturm_entropy(double N, const ProbMeasure& mu, const MetricMeasureSpace& space) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw InputError("sturm_entropy needs 1 <= N < inf");
  auto dec = lebesgue_decompose(space, mu);
  double integral = 0.0;
  for (Index x : space.support()) {
    double rho = dec.density[x].get_d();
    if (rho > 0) integral += space.nu_value(x) * std::pow(rho, 1.0 - 1.0 / N);
  }
  return N - N * integral;
}

LambdaEstimate lambda_of_U(const EntropyFunctional& U, double K) {
  LambdaEstimate e;
  if (K == 0.0) return e;
  const double sign = K > 0 ? 1.0 : -1.0;
  for (double at : {10.0, 20.0, 40.0}) {
    double l = sign * at;
    e.slopes.push_back(U.psi(l + 0.5, kInfinity) - U.psi(l - 0.5, kInfinity));
  }
  double last = e.slopes.back();
  double prev = e.slopes[1];
  e.converged = std::isfinite(last) && std::abs(last - prev) <= kSlopeTolerance * std::max(1.0, std::abs(last));
  if (!e.converged) {
    std::ostringstream os;
    os << "slope of psi at " << (K > 0 ? "+" : "-") << "infinity did not settle for " << U.name() << ": slopes";
    for (double s : e.slopes) os << ' ' << s;
    throw NumericalError(os.str());
  }
  e.value = -K * last;
  return e;
}

double distorted_term(const EntropyFunctional& U, const TransferencePlan& plan, const MetricMeasureSpace& space,
                      const CurvatureParams& params, double t, const std::vector<double>& rho1) {
  double total = 0.0;
  for (const auto& e : plan.entries()) {
    if (!space.in_support(e.to)) continue;
    double r = rho1[e.to];
    if (r <= 0.0) continue;
    double b = beta(params.K, params.N, t, space.d(e.from, e.to));
    double mass = e.mass.get_d();
    if (std::isinf(b)) {
      total += mass * U.slope_at_zero();  // beta U(rho/beta) read as U'(0) rho
    } else {
      total += mass * b * U(r / b) / r;
    }
  }
  return total;
}

std::string to_string(CdVerdict v) {
  return v == CdVerdict::certified ? "certified" : "violated-on-this-plan";
}

const CdCheck* CdReport::witness() const {
  if (verdict == CdVerdict::certified || plans.empty() || plans.front().checks.empty()) return nullptr;
  return &plans.front().checks[plans.front().worst];
}

namespace {

bool holds(double lhs, double rhs, double tol) {
  if (std::isnan(lhs) || std::isnan(rhs)) return false;
  if (lhs == -kInfinity || rhs == kInfinity) return true;
  if (std::isinf(lhs) || std::isinf(rhs)) return false;
  return rhs - lhs >= -tol * (1.0 + std::abs(rhs));
}

double margin_of(double lhs, double rhs) {
  if (lhs == rhs) return 0.0;
  return rhs - lhs;
}

void check_endpoints(const MetricMeasureSpace& space, const ProbMeasure& mu0, const ProbMeasure& mu1) {
  if (mu0.size() != space.size() || mu1.size() != space.size()) throw InputError("measure and space sizes differ");
  for (Index x = 0; x < space.size(); ++x)
    if (!space.in_support(x) && (mu0[x] > 0 || mu1[x] > 0))
      throw InputError("endpoint measures must be supported in supp(nu)");
}

}  // namespace

CdReport verify_cd(const MetricMeasureSpace& space, const CurvatureParams& params, const ProbMeasure& mu0,
                   const ProbMeasure& mu1, const std::vector<EntropyFunctional>& functionals,
                   const GeodesicAtlas& atlas, const CdOptions& options) {
  params.check();
  check_endpoints(space, mu0, mu1);
  if (functionals.empty()) throw InputError("verify_cd needs at least one functional");
  for (const auto& U : functionals) {
    auto member = dc_membership(U, params.N);
    if (!member.passed) throw InputError(U.name() + " is not in DC_N for N = " + format_number(params.N) + ": " + member.reason);
  }

  CdReport report;
  report.params = params;
  report.mu0 = mu0;
  report.mu1 = mu1;
  report.steps = atlas.steps();
  report.tolerance = options.tolerance;
  TransportResult tr = solve_w2(space, mu0, mu1, {options.mode, PivotRule::bland});
  report.plan = tr.plan;
  report.w2 = tr.distance;

  const auto d0 = lebesgue_decompose(space, mu0);
  const auto d1 = lebesgue_decompose(space, mu1);
  const auto rho0 = to_doubles(d0.density);
  const auto rho1 = to_doubles(d1.density);
  const double s0 = d0.singular_mass.get_d();
  const double s1 = d1.singular_mass.get_d();
  std::vector<PlanEntry> flipped;
  for (const auto& e : tr.plan.entries()) flipped.push_back({e.to, e.from, e.mass});
  const TransferencePlan reversed(space.size(), std::move(flipped));
  const int m = atlas.steps();

  for (LiftSelection sel : {LiftSelection::canonical, LiftSelection::uniform_split}) {
    CdPlanResult pr;
    pr.selection = sel;
    DynamicalPlan plan = lift_to_dynamical(tr.plan, atlas, sel);
    std::vector<ProbMeasure> mus;
    for (int j = 0; j <= m; ++j) mus.push_back(interpolate(plan, j));
    pr.checks.resize(functionals.size() * (m + 1));
    parallel_for(pr.checks.size(), [&](std::size_t k) {
      const auto& U = functionals[k / (m + 1)];
      int j = static_cast<int>(k % (m + 1));
      double t = static_cast<double>(j) / m;
      CdCheck c;
      c.functional = U.name();
      c.j = j;
      c.t = t;
      c.lhs = entropy(U, mus[j], space);
      double a0 = distorted_term(U, reversed, space, params, 1.0 - t, rho0);
      double a1 = distorted_term(U, tr.plan, space, params, t, rho1);
      double rhs = (1.0 - t) * a0 + t * a1;
      double sing = (1.0 - t) * s0 + t * s1;
      if (sing > 0) rhs += std::isinf(U.slope_at_infinity()) ? kInfinity : U.slope_at_infinity() * sing;
      // 0 * (-inf) at the endpoint times is 0.
      if (j == 0) rhs = a0 + (s0 > 0 ? (std::isinf(U.slope_at_infinity()) ? kInfinity : U.slope_at_infinity() * s0) : 0.0);
      if (j == m) rhs = a1 + (s1 > 0 ? (std::isinf(U.slope_at_infinity()) ? kInfinity : U.slope_at_infinity() * s1) : 0.0);
      c.rhs = rhs;
      c.margin = margin_of(c.lhs, c.rhs);
      c.passed = holds(c.lhs, c.rhs, options.tolerance);
      pr.checks[k] = c;
    });
    pr.passed = true;
    for (std::size_t k = 0; k < pr.checks.size(); ++k) {
      pr.passed = pr.passed && pr.checks[k].passed;
      const auto& w = pr.checks[pr.worst];
      const auto& c = pr.checks[k];
      bool worse = (!c.passed && w.passed) || (c.passed == w.passed && c.margin < w.margin);
      if (worse) pr.worst = k;
    }
    report.plans.push_back(std::move(pr));
  }
  report.verdict = std::any_of(report.plans.begin(), report.plans.end(), [](const CdPlanResult& p) { return p.passed; })
                       ? CdVerdict::certified
                       : CdVerdict::violated_on_this_plan;
  return report;
}

InftyConvexityReport verify_infty_convexity(const MetricMeasureSpace& space, double K, const ProbMeasure& mu0,
                                            const ProbMeasure& mu1, const EntropyFunctional& U,
                                            const GeodesicAtlas& atlas, const InftyOptions& options) {
  if (!std::isfinite(K)) throw InputError("K must be finite");
  check_endpoints(space, mu0, mu1);
  auto member = dc_membership(U, kInfinity);
  if (!member.passed) throw InputError(U.name() + " is not in DC_inf: " + member.reason);
  const double lambda = lambda_of_U(U, K).value;
  TransportResult tr = solve_w2(space, mu0, mu1, {options.mode, PivotRule::bland});
  const double w2sq = std::max(0.0, tr.cost.get_d());
  const double u0 = entropy(U, mu0, space);
  const double u1 = entropy(U, mu1, space);
  const int m = atlas.steps();

  std::vector<InftyConvexityReport> tried;
  for (LiftSelection sel : {LiftSelection::canonical, LiftSelection::uniform_split}) {
    InftyConvexityReport r;
    r.K = K;
    r.functional = U.name();
    r.lambda = lambda;
    r.w2 = tr.distance;
    r.defect_tolerance = options.defect_tolerance;
    r.selection = sel;
    r.passed = true;
    DynamicalPlan plan = lift_to_dynamical(tr.plan, atlas, sel);
    for (int j = 0; j <= m; ++j) {
      InftyCheck c;
      c.j = j;
      c.t = static_cast<double>(j) / m;
      c.lhs = entropy(U, interpolate(plan, j), space);
      c.chord = j == 0 ? u0 : j == m ? u1 : c.t * u1 + (1.0 - c.t) * u0;
      c.defect = 0.5 * lambda * c.t * (1.0 - c.t) * w2sq;
      c.rhs = c.chord - c.defect + options.defect_tolerance * std::abs(c.defect);
      c.margin = margin_of(c.lhs, c.rhs);
      c.passed = holds(c.lhs, c.rhs, options.tolerance);
      r.passed = r.passed && c.passed;
      r.checks.push_back(c);
    }
    if (r.passed) return r;
    tried.push_back(std::move(r));
  }
  return tried.front();
}

DiameterReport diameter_bound_check(const MetricMeasureSpace& space, double K, double N) {
  if (!(K > 0.0) || !std::isfinite(K)) throw InputError("the diameter bound needs K > 0");
  if (!(N >= 1.0) || !std::isfinite(N)) throw InputError("the diameter bound needs finite N >= 1");
  DiameterReport r;
  r.diameter = space.support_diameter();
  r.bound = kPi * std::sqrt((N - 1.0) / K);
  r.margin = r.bound - r.diameter;
  r.passed = r.diameter <= r.bound + kMetricTolerance;
  return r;
}

}  // namespace cdkit
