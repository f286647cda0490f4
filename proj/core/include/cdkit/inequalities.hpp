#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdkit/geodesics.hpp"
#include "cdkit/space.hpp"

namespace cdkit {

/// sup |f(x) - f(y)| / d(x, y) over distinct support points.
double lipschitz_constant(const MetricMeasureSpace& space, const std::vector<double>& f);

enum class GradientKind { upper, minus };
std::string to_string(GradientKind k);

struct GradientField {
  std::vector<double> values;
  GradientKind kind = GradientKind::upper;
  double h = 0.0;  ///< neighbourhood radius the field was computed with
};

/// 2 mesh(space).
double default_gradient_radius(const MetricMeasureSpace& space);

/// max over y != x, d(x,y) <= h of [f(y) - f(x)]_- / d(x,y); 0 if x has no
/// such neighbour. Throws InputError for h <= 0.
GradientField minus_gradient(const MetricMeasureSpace& space, const std::vector<double>& f, double h);

/// Same neighbourhood, |f(y) - f(x)| / d(x,y).
GradientField lipschitz_gradient(const MetricMeasureSpace& space, const std::vector<double>& f,
                                 double h);

struct ChainGradientReport {
  double worst_excess = 0.0;  ///< max of |f(end) - f(start)| - chain integral of g
  std::size_t chains = 0;
  bool passed = false;
};

/// Upper-gradient inequality restricted to atlas chains: the variation of f
/// between the endpoints is at most the trapezoid sum of g d along the chain.
ChainGradientReport chain_gradient_check(const MetricMeasureSpace& space,
                                         const std::vector<double>& f, const std::vector<double>& g,
                                         const GeodesicAtlas& atlas, double tolerance = 1e-9);

struct LocalPoincareReport {
  double lhs = 0.0;  ///< nu-average over B of |f - <f>_B|
  double rhs = 0.0;  ///< P r (nu-average of g over lambda B)
  double margin = 0.0;
  double needed = 0.0;  ///< smallest P that passes; +inf when the g-average is 0 and lhs > 0
  double lambda = 0.0;
  double constant = 0.0;
  bool passed = false;
};

/// Throws InputError when nu[B] = 0.
LocalPoincareReport local_poincare_check(const MetricMeasureSpace& space,
                                         const std::vector<double>& f, const std::vector<double>& g,
                                         const Ball& ball, double lambda, double constant,
                                         double tolerance = 1e-12);

struct PoincareSweep {
  double p_empirical = 0.0;
  std::size_t worst_field = 0;
  std::size_t worst_ball = 0;
  double lambda = 0.0;
  double h = 0.0;
};

/// Smallest P for which every (field, ball) pair passes with
/// g = lipschitz_gradient(f, h). Throws InputError on empty lists.
PoincareSweep local_poincare_sweep(const MetricMeasureSpace& space,
                                   const std::vector<std::vector<double>>& fields,
                                   const std::vector<Ball>& balls, double lambda, double h);

/// r sup over alpha in [0, pi] of the Sobolev bracket. Requires N > 1, K > 0,
/// r > 0, g >= 0 (InputError otherwise).
double theta(double N, double K, double r, double g);

/// (1/(2K)) ((N-1)/N)^2 r^{-1-2/N} / (1/3 + (2/3) r^{-1/N}) g^2.
double theta_relaxed(double N, double K, double r, double g);

struct ElementaryMargins {
  long double tan_margin = 0;  ///< 1 - x^2/3 - x/tan x
  long double sin_margin = 0;  ///< (x/sin x)^{1-1/N} - 1 - (1-1/N) x^2/6
};

/// Both margins at one x in (0, pi), in long double; series expansions are
/// used below x = 1e-2 where the direct forms cancel.
ElementaryMargins elementary_margins(long double x, double N);

struct ElementaryBoundsReport {
  std::vector<double> dimensions;
  std::size_t samples = 0;
  double min_margin_tan = 0.0;  ///< min of 1 - x^2/3 - x/tan x
  double min_margin_sin = 0.0;  ///< min of -(1-1/N) x^2/6 - 1 + (x/sin x)^{1-1/N}
  double worst_x_tan = 0.0;
  double worst_x_sin = 0.0;
  bool passed = false;
};

/// Both elementary trigonometric bounds at every grid point and dimension.
ElementaryBoundsReport elementary_bounds_check(const std::vector<double>& grid,
                                               const std::vector<double>& dimensions);

struct SobolevReport {
  double N = 0.0;
  double K = 0.0;
  double h = 0.0;
  double lhs = 0.0;          ///< N - N int rho^{1-1/N}
  double rhs = 0.0;          ///< int theta(rho, |grad^- rho|)
  double rhs_relaxed = 0.0;  ///< int theta_relaxed(rho, |grad^- rho|)
  double margin = 0.0;
  double relaxed_margin = 0.0;
  bool ordered = false;      ///< rhs <= rhs_relaxed
  bool passed = false;
};

/// rho0 must be positive with int rho0 d nu = 1 (InputError otherwise).
SobolevReport sobolev_check(const MetricMeasureSpace& space, double N, double K,
                            const std::vector<double>& rho0, double h);

/// Floors nonnegative rho at 1e-12 and renormalizes before sobolev_check.
SobolevReport sobolev_check_nonnegative(const MetricMeasureSpace& space, double N, double K,
                                        std::vector<double> rho, double h);

struct EmbeddingReport {
  double N = 0.0;
  double K = 0.0;
  double h = 0.0;
  double lhs = 0.0;  ///< 1 - (int f)^{2/(N+2)}
  double rhs = 0.0;  ///< 6/(KN) (N/(N-2))^2 int |grad^- f|^2
  double margin = 0.0;
  double holder_lhs = 0.0;  ///< int f^{2(N-1)/(N-2)}
  double holder_rhs = 0.0;  ///< (int f^{2N/(N-2)})^{N/(N+2)} (int f)^{2/(N+2)}
  bool holder_passed = false;
  bool passed = false;
};

/// f >= 0 with int f^{2N/(N-2)} = 1, N > 2 (InputError otherwise).
EmbeddingReport sobolev_embedding_check(const MetricMeasureSpace& space, double N, double K,
                                        const std::vector<double>& f, double h);

/// Scales f >= 0 so that int f^{2N/(N-2)} d nu = 1.
std::vector<double> normalize_embedding_field(const MetricMeasureSpace& space, double N,
                                              std::vector<double> f);

struct GlobalPoincareReport {
  double N = 0.0;
  double K = 0.0;
  double h = 0.0;
  double l2 = 0.0;        ///< int f^2
  double energy = 0.0;    ///< int |grad^- f|^2
  double ratio = 0.0;     ///< l2 / energy; +inf when energy = 0 < l2
  double bound = 0.0;     ///< (N-1)/(KN)
  double margin = 0.0;    ///< bound energy - l2
  bool passed = false;
};

/// int f = 0 within kMassTolerance is required (InputError otherwise).
GlobalPoincareReport global_poincare_check(const MetricMeasureSpace& space, double N, double K,
                                           const std::vector<double>& f, double h);

/// f - int f d nu.
std::vector<double> center_field(const MetricMeasureSpace& space, std::vector<double> f);

struct RayleighSweep {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;
};

/// Random zero-mean fields built from cos(d(p, .)), d(p, .) and d(p, .)^2
/// around random anchor points, with Gaussian coefficients.
RayleighSweep rayleigh_sweep(const MetricMeasureSpace& space, std::size_t samples,
                             std::uint64_t seed, double h);

struct TaylorReport {
  double N = 0.0;
  std::vector<double> eps;
  std::vector<double> residuals;  ///< H((1+eps f) nu) - eps^2 (N-1)/(2N) int f^2
  std::vector<double> ratios;     ///< residual[k] / residual[k+1]
  double fitted_c = 0.0;          ///< max |residual| / eps^3
  double ratio_low = 6.0;
  double ratio_high = 10.0;
  bool passed = false;
};

/// Requires int f = 0, max |f| <= 1 and eps in (0, 1). The ratio window is
/// checked only where consecutive eps halve. A zero field passes trivially.
TaylorReport taylor_step_check(const MetricMeasureSpace& space, double N,
                               const std::vector<double>& f, const std::vector<double>& eps,
                               double ratio_low = 6.0, double ratio_high = 10.0);

}  // namespace cdkit
