#include "cdkit/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cdkit/error.hpp"
#include "cdkit/parallel.hpp"

namespace cdkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_field(const MetricMeasureSpace& space, const std::vector<double>& f, const char* what) {
  if (f.size() != space.size()) throw InputError(std::string(what) + " has the wrong length");
  for (double v : f)
    if (!std::isfinite(v)) throw InputError(std::string(what) + " has a non-finite value");
}

double integral(const MetricMeasureSpace& space, const std::vector<double>& f) {
  double s = 0.0;
  for (Index x : space.support()) s += space.nu_value(x) * f[x];
  return s;
}

template <typename F>
double integral_of(const MetricMeasureSpace& space, F&& f) {
  double s = 0.0;
  for (Index x : space.support()) s += space.nu_value(x) * f(x);
  return s;
}

}  // namespace

double lipschitz_constant(const MetricMeasureSpace& space, const std::vector<double>& f) {
  check_field(space, f, "field");
  double best = 0.0;
  const auto& s = space.support();
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      best = std::max(best, std::abs(f[s[a]] - f[s[b]]) / space.d(s[a], s[b]));
  return best;
}

std::string to_string(GradientKind k) { return k == GradientKind::upper ? "upper_gradient" : "minus_gradient"; }

double default_gradient_radius(const MetricMeasureSpace& space) { return 2.0 * space.mesh(); }

namespace {

template <typename Rate>
GradientField neighbour_gradient(const MetricMeasureSpace& space, const std::vector<double>& f, double h,
                                 GradientKind kind, Rate rate) {
  if (!(h > 0.0)) throw InputError("gradient radius h must be positive");
  check_field(space, f, "field");
  GradientField g;
  g.kind = kind;
  g.h = h;
  g.values.assign(space.size(), 0.0);
  const double reach = h * (1.0 + 1e-12);
  for (Index x = 0; x < space.size(); ++x)
    for (Index y = 0; y < space.size(); ++y) {
      if (y == x) continue;
      double d = space.d(x, y);
      if (d > reach || d <= 0.0) continue;
      g.values[x] = std::max(g.values[x], rate(f[x], f[y]) / d);
    }
  return g;
}

}  // namespace

GradientField minus_gradient(const MetricMeasureSpace& space, const std::vector<double>& f, double h) {
  return neighbour_gradient(space, f, h, GradientKind::minus,
                            [](double fx, double fy) { return std::max(0.0, fx - fy); });
}

GradientField lipschitz_gradient(const MetricMeasureSpace& space, const std::vector<double>& f, double h) {
  return neighbour_gradient(space, f, h, GradientKind::upper, [](double fx, double fy) { return std::abs(fx - fy); });
}

ChainGradientReport chain_gradient_check(const MetricMeasureSpace& space, const std::vector<double>& f,
                                         const std::vector<double>& g, const GeodesicAtlas& atlas, double tolerance) {
  check_field(space, f, "field");
  check_field(space, g, "gradient");
  ChainGradientReport r;
  r.worst_excess = -kInf;
  for (const auto& [key, list] : atlas.entries())
    for (const auto& geo : list) {
      double along = 0.0;
      for (std::size_t k = 0; k + 1 < geo.chain.size(); ++k) {
        Index a = geo.chain[k], b = geo.chain[k + 1];
        along += 0.5 * (g[a] + g[b]) * space.d(a, b);
      }
      double excess = std::abs(f[geo.end()] - f[geo.start()]) - along;
      r.worst_excess = std::max(r.worst_excess, excess);
      ++r.chains;
    }
  if (r.chains == 0) r.worst_excess = 0.0;
  r.passed = r.worst_excess <= tolerance;
  return r;
}

LocalPoincareReport local_poincare_check(const MetricMeasureSpace& space, const std::vector<double>& f,
                                         const std::vector<double>& g, const Ball& B, double lambda, double P,
                                         double tolerance) {
  check_field(space, f, "field");
  check_field(space, g, "gradient");
  if (B.mass <= 0) throw InputError("local Poincare check needs nu[B] > 0");
  if (!(lambda >= 1.0)) throw InputError("lambda must be at least 1");
  Ball big = ball(space, B.center, lambda * B.radius);
  const double mB = B.mass.get_d();
  double mean = 0.0;
  for (Index x : B.members) mean += space.nu_value(x) * f[x];
  mean /= mB;
  double dev = 0.0;
  for (Index x : B.members) dev += space.nu_value(x) * std::abs(f[x] - mean);
  double gbar = 0.0;
  for (Index x : big.members) gbar += space.nu_value(x) * g[x];
  gbar /= big.mass.get_d();

  LocalPoincareReport r;
  r.lambda = lambda;
  r.constant = P;
  r.lhs = dev / mB;
  r.rhs = P * B.radius * gbar;
  r.margin = r.rhs - r.lhs;
  double scale = B.radius * gbar;
  r.needed = r.lhs <= tolerance ? 0.0 : (scale > 0.0 ? r.lhs / scale : kInf);
  r.passed = r.lhs <= r.rhs + tolerance;
  return r;
}

PoincareSweep local_poincare_sweep(const MetricMeasureSpace& space, const std::vector<std::vector<double>>& fields,
                                   const std::vector<Ball>& balls, double lambda, double h) {
  if (fields.empty() || balls.empty()) throw InputError("local Poincare sweep needs fields and balls");
  std::vector<std::vector<double>> grads(fields.size());
  parallel_for(fields.size(), [&](std::size_t i) { grads[i] = lipschitz_gradient(space, fields[i], h).values; });
  std::vector<double> needed(fields.size() * balls.size(), 0.0);
  parallel_for(needed.size(), [&](std::size_t k) {
    const auto& B = balls[k % balls.size()];
    if (B.mass <= 0) return;
    std::size_t i = k / balls.size();
    needed[k] = local_poincare_check(space, fields[i], grads[i], B, lambda, 0.0).needed;
  });
  PoincareSweep s;
  s.lambda = lambda;
  s.h = h;
  for (std::size_t k = 0; k < needed.size(); ++k)
    if (needed[k] > s.p_empirical) {
      s.p_empirical = needed[k];
      s.worst_field = k / balls.size();
      s.worst_ball = k % balls.size();
    }
  return s;
}

namespace {

void check_theta_args(double N, double K, double r, double g) {
  if (!(N > 1.0) || !std::isfinite(N)) throw InputError("theta needs 1 < N < inf");
  if (!(K > 0.0)) throw InputError("theta needs K > 0");
  if (!(r > 0.0)) throw InputError("theta needs r > 0");
  if (!(g >= 0.0)) throw InputError("theta needs g >= 0");
}

}  // namespace

double theta(double N, double K, double r, double g) {
  check_theta_args(N, K, r, g);
  const double pi = std::numbers::pi;
  const double slope = (N - 1.0) / N * g / std::pow(r, 1.0 + 1.0 / N) * std::sqrt((N - 1.0) / K);
  const double r1n = std::pow(r, -1.0 / N);
  auto bracket = [&](double a) {
    if (a <= 0.0) return 0.0;
    if (a >= pi) return -kInf;
    return slope * a + N * (1.0 - std::pow(a / std::sin(a), 1.0 - 1.0 / N)) + (N - 1.0) * (a / std::tan(a) - 1.0) * r1n;
  };
  constexpr int kGrid = 2048;
  double best = 0.0;  // alpha = 0
  int best_k = 0;
  for (int k = 1; k < kGrid; ++k) {
    double v = bracket(pi * k / kGrid);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  if (best_k > 0) {
    double lo = pi * (best_k - 1) / kGrid, hi = pi * (best_k + 1) / kGrid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = bracket(x1), f2 = bracket(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = bracket(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = bracket(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return r * best;
}

double theta_relaxed(double N, double K, double r, double g) {
  check_theta_args(N, K, r, g);
  double c = (N - 1.0) / N;
  return c * c / (2.0 * K) * std::pow(r, -1.0 - 2.0 / N) / (1.0 / 3.0 + 2.0 / 3.0 * std::pow(r, -1.0 / N)) * g * g;
}

ElementaryMargins elementary_margins(long double x, double N) {
  const long double a = 1.0L - 1.0L / N;
  ElementaryMargins m;
  long double x2 = x * x;
  long double excess;  // x / sin x - 1
  if (x < 1e-2L) {
    m.tan_margin = x2 * x2 * (1.0L / 45 + x2 * (2.0L / 945 + x2 * (1.0L / 4725)));
    excess = x2 * (1.0L / 6 + x2 * (7.0L / 360 + x2 * (31.0L / 15120 + x2 * (127.0L / 604800))));
  } else {
    m.tan_margin = 1.0L - x2 / 3 - x / std::tan(x);
    excess = x / std::sin(x) - 1.0L;
  }
  m.sin_margin = std::expm1(a * std::log1p(excess)) - a * x2 / 6;
  return m;
}

ElementaryBoundsReport elementary_bounds_check(const std::vector<double>& grid, const std::vector<double>& dimensions) {
  const double pi = std::numbers::pi;
  for (double x : grid)
    if (!(x > 0.0 && x < pi)) throw InputError("elementary bounds grid must lie in (0, pi)");
  for (double N : dimensions)
    if (!(N >= 1.0) || !std::isfinite(N)) throw InputError("dimensions must be finite and at least 1");
  ElementaryBoundsReport r;
  r.dimensions = dimensions;
  r.samples = grid.size();
  r.min_margin_tan = kInf;
  r.min_margin_sin = kInf;
  for (double x : grid) {
    for (double N : dimensions) {
      auto m = elementary_margins(x, N);
      if (static_cast<double>(m.tan_margin) < r.min_margin_tan) {
        r.min_margin_tan = static_cast<double>(m.tan_margin);
        r.worst_x_tan = x;
      }
      if (static_cast<double>(m.sin_margin) < r.min_margin_sin) {
        r.min_margin_sin = static_cast<double>(m.sin_margin);
        r.worst_x_sin = x;
      }
    }
  }
  r.passed = r.min_margin_tan >= 0.0 && r.min_margin_sin >= 0.0;
  return r;
}

SobolevReport sobolev_check(const MetricMeasureSpace& space, double N, double K, const std::vector<double>& rho0,
                            double h) {
  check_field(space, rho0, "rho0");
  for (Index x : space.support())
    if (!(rho0[x] > 0.0)) throw InputError("rho0 must be positive on supp(nu)");
  if (std::abs(integral(space, rho0) - 1.0) > kMassTolerance) throw InputError("rho0 must integrate to 1 against nu");
  auto g = minus_gradient(space, rho0, h);
  SobolevReport r;
  r.N = N;
  r.K = K;
  r.h = h;
  r.lhs = N - N * integral_of(space, [&](Index x) { return std::pow(rho0[x], 1.0 - 1.0 / N); });
  std::vector<double> th(space.size(), 0.0), rel(space.size(), 0.0);
  parallel_for(space.support().size(), [&](std::size_t k) {
    Index x = space.support()[k];
    th[x] = theta(N, K, rho0[x], g.values[x]);
    rel[x] = theta_relaxed(N, K, rho0[x], g.values[x]);
  });
  r.rhs = integral(space, th);
  r.rhs_relaxed = integral(space, rel);
  r.margin = r.rhs - r.lhs;
  r.relaxed_margin = r.rhs_relaxed - r.lhs;
  r.ordered = r.rhs <= r.rhs_relaxed + 1e-12 * (1.0 + std::abs(r.rhs_relaxed));
  r.passed = r.margin >= 0.0 && r.relaxed_margin >= 0.0;
  return r;
}

SobolevReport sobolev_check_nonnegative(const MetricMeasureSpace& space, double N, double K, std::vector<double> rho,
                                        double h) {
  check_field(space, rho, "rho");
  for (double& v : rho) {
    if (v < 0.0) throw InputError("rho must be nonnegative");
    v = std::max(v, 1e-12);
  }
  double total = integral(space, rho);
  for (double& v : rho) v /= total;
  return sobolev_check(space, N, K, rho, h);
}

EmbeddingReport sobolev_embedding_check(const MetricMeasureSpace& space, double N, double K, const std::vector<double>& f,
                                        double h) {
  if (!(N > 2.0) || !std::isfinite(N)) throw InputError("the embedding inequality needs 2 < N < inf");
  if (!(K > 0.0)) throw InputError("the embedding inequality needs K > 0");
  check_field(space, f, "f");
  for (double v : f)
    if (v < 0.0) throw InputError("f must be nonnegative");
  const double q = 2.0 * N / (N - 2.0);
  const double norm = integral_of(space, [&](Index x) { return std::pow(f[x], q); });
  if (std::abs(norm - 1.0) > kMassTolerance) throw InputError("f must satisfy int f^{2N/(N-2)} = 1");
  auto g = minus_gradient(space, f, h);
  EmbeddingReport r;
  r.N = N;
  r.K = K;
  r.h = h;
  const double l1 = integral(space, f);
  r.lhs = 1.0 - std::pow(l1, 2.0 / (N + 2.0));
  const double c = N / (N - 2.0);
  r.rhs = 6.0 / (K * N) * c * c * integral_of(space, [&](Index x) { return g.values[x] * g.values[x]; });
  r.margin = r.rhs - r.lhs;
  r.holder_lhs = integral_of(space, [&](Index x) { return std::pow(f[x], 2.0 * (N - 1.0) / (N - 2.0)); });
  r.holder_rhs = std::pow(norm, N / (N + 2.0)) * std::pow(l1, 2.0 / (N + 2.0));
  r.holder_passed = r.holder_lhs <= r.holder_rhs * (1.0 + 1e-12);
  r.passed = r.margin >= 0.0;
  return r;
}

std::vector<double> normalize_embedding_field(const MetricMeasureSpace& space, double N, std::vector<double> f) {
  if (!(N > 2.0)) throw InputError("the embedding normalization needs N > 2");
  check_field(space, f, "f");
  const double q = 2.0 * N / (N - 2.0);
  double norm = integral_of(space, [&](Index x) { return std::pow(std::max(0.0, f[x]), q); });
  if (!(norm > 0.0)) throw InputError("cannot normalize a field with zero norm");
  double scale = std::pow(norm, -1.0 / q);
  for (double& v : f) v = std::max(0.0, v) * scale;
  return f;
}

GlobalPoincareReport global_poincare_check(const MetricMeasureSpace& space, double N, double K,
                                           const std::vector<double>& f, double h) {
  if (!(N > 1.0) || !std::isfinite(N)) throw InputError("the global Poincare inequality needs 1 < N < inf");
  if (!(K > 0.0)) throw InputError("the global Poincare inequality needs K > 0");
  check_field(space, f, "f");
  if (std::abs(integral(space, f)) > kMassTolerance) throw InputError("f must have zero mean against nu");
  auto g = minus_gradient(space, f, h);
  GlobalPoincareReport r;
  r.N = N;
  r.K = K;
  r.h = h;
  r.l2 = integral_of(space, [&](Index x) { return f[x] * f[x]; });
  r.energy = integral_of(space, [&](Index x) { return g.values[x] * g.values[x]; });
  r.bound = (N - 1.0) / (K * N);
  r.ratio = r.energy > 0.0 ? r.l2 / r.energy : (r.l2 > 0.0 ? kInf : 0.0);
  r.margin = r.bound * r.energy - r.l2;
  r.passed = r.margin >= -1e-12 * r.l2;
  return r;
}

std::vector<double> center_field(const MetricMeasureSpace& space, std::vector<double> f) {
  check_field(space, f, "field");
  double mean = integral(space, f);
  for (double& v : f) v -= mean;
  return f;
}

RayleighSweep rayleigh_sweep(const MetricMeasureSpace& space, std::size_t samples, std::uint64_t seed, double h) {
  RayleighSweep s;
  s.samples = samples;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> coef(0.0, 1.0);
  const auto& supp = space.support();
  std::uniform_int_distribution<std::size_t> pick(0, supp.size() - 1);
  std::vector<std::vector<double>> fields(samples);
  for (auto& f : fields) {
    f.assign(space.size(), 0.0);
    for (int k = 0; k < 3; ++k) {
      Index p = supp[pick(rng)];
      double a = coef(rng), b = coef(rng), c = coef(rng);
      for (Index x = 0; x < space.size(); ++x) {
        double d = space.d(p, x);
        f[x] += a * std::cos(d) + b * d + c * d * d;
      }
    }
    f = center_field(space, std::move(f));
  }
  s.ratios.assign(samples, 0.0);
  parallel_for(samples, [&](std::size_t i) {
    auto g = minus_gradient(space, fields[i], h);
    double l2 = integral_of(space, [&](Index x) { return fields[i][x] * fields[i][x]; });
    double e = integral_of(space, [&](Index x) { return g.values[x] * g.values[x]; });
    s.ratios[i] = e > 0.0 ? l2 / e : (l2 > 0.0 ? kInf : 0.0);
  });
  for (std::size_t i = 0; i < samples; ++i)
    if (s.ratios[i] > s.max_ratio) {
      s.max_ratio = s.ratios[i];
      s.argmax = i;
    }
  return s;
}

TaylorReport taylor_step_check(const MetricMeasureSpace& space, double N, const std::vector<double>& f,
                               const std::vector<double>& eps, double ratio_low, double ratio_high) {
  if (!(N > 1.0) || !std::isfinite(N)) throw InputError("the Taylor step needs 1 < N < inf");
  check_field(space, f, "f");
  if (std::abs(integral(space, f)) > kMassTolerance) throw InputError("f must have zero mean against nu");
  for (Index x : space.support())
    if (std::abs(f[x]) > 1.0) throw InputError("f must satisfy max |f| <= 1");
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0)) throw InputError("eps values must lie in (0, 1)");
  TaylorReport r;
  r.N = N;
  r.eps = eps;
  r.ratio_low = ratio_low;
  r.ratio_high = ratio_high;
  const double a = 1.0 - 1.0 / N;
  const double l2 = integral_of(space, [&](Index x) { return f[x] * f[x]; });
  bool zero = true;
  for (Index x : space.support()) zero = zero && f[x] == 0.0;
  for (double e : eps) {
    // N - N int (1 + e f)^a = -N int ((1 + e f)^a - 1) since nu has mass 1.
    double h = -N * integral_of(space, [&](Index x) { return std::expm1(a * std::log1p(e * f[x])); });
    double res = h - e * e * (N - 1.0) / (2.0 * N) * l2;
    r.residuals.push_back(res);
    r.fitted_c = std::max(r.fitted_c, std::abs(res) / (e * e * e));
  }
  r.passed = true;
  if (zero) return r;
  for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
    double ratio = r.residuals[k] / r.residuals[k + 1];
    r.ratios.push_back(ratio);
    bool halves = std::abs(eps[k + 1] * 2.0 - eps[k]) <= 1e-12 * eps[k];
    if (halves && !(ratio >= ratio_low && ratio <= ratio_high)) r.passed = false;
  }
  return r;
}

}  // namespace cdkit
