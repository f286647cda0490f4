#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cdkit/geodesics.hpp"
#include "cdkit/space.hpp"
#include "cdkit/transport.hpp"

namespace cdkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CurvatureParams {
  double K = 0.0;
  double N = kInfinity;  ///< in [1, inf]

  /// Throws InputError unless N >= 1 and K is finite.
  void check() const;
};

/// sqrt(|K|/(N-1)) d. Throws InputError for N <= 1.
double alpha(double K, double N, double d);

/// Distortion coefficient beta_t(x0, x1) for distance d; may return +inf.
double beta(double K, double N, double t, double d);

/// tau^{(t)}_{K,N}(d); +inf when K > 0 and alpha > pi.
double tau(double K, double N, double t, double d);

/// A convex U on [0, inf) with U(0) = 0, plus what the entropy needs to know
/// about its behaviour at 0 and infinity.
class EntropyFunctional {
 public:
  EntropyFunctional(std::string name, std::function<double(double)> u, double slope_at_infinity,
                    double slope_at_zero);

  /// U_N(r) = N r (1 - r^{-1/N}); N >= 1.
  static EntropyFunctional sturm(double N);
  /// r ln r.
  static EntropyFunctional boltzmann();
  /// (r^p - r)/(p - 1); p > 1.
  static EntropyFunctional power(double p);
  /// c r.
  static EntropyFunctional linear(double c);

  const std::string& name() const { return name_; }
  double operator()(double r) const;
  double slope_at_infinity() const { return slope_inf_; }  ///< U'(inf), possibly +inf
  double slope_at_zero() const { return slope_zero_; }     ///< U'(0), possibly -inf

  /// lambda^N U(lambda^-N) for finite N, e^lambda U(e^-lambda) for N = inf.
  double psi(double lambda, double N) const;

 private:
  std::string name_;
  std::function<double(double)> u_;
  double slope_inf_;
  double slope_zero_;
};

/// "UN:N=2", "Uinfty", "power:p=2", "linear:c=0.5". Throws InputError.
EntropyFunctional functional_by_name(std::string_view name);

inline constexpr int kDcSamples = 1024;
inline constexpr double kDcTolerance = 1e-10;

struct DcMembership {
  bool passed = false;
  std::string reason;       ///< empty on success
  double witness = 0.0;     ///< sample where the check failed
  double defect = 0.0;      ///< most negative scaled second difference
};

/// Sampled check that U is convex with U(0) = 0 and psi is convex and
/// nonincreasing, on kDcSamples log-spaced points.
DcMembership dc_membership(const EntropyFunctional& U, double N);

/// int U(rho) d nu + U'(inf) mu_s(X); +inf when mu_s > 0 and U'(inf) = inf.
double entropy(const EntropyFunctional& U, const ProbMeasure& mu, const MetricMeasureSpace& space);

/// N - N int rho^{1-1/N} d nu; N finite.
double sturm_entropy(double N, const ProbMeasure& mu, const MetricMeasureSpace& space);

struct LambdaEstimate {
  double value = 0.0;
  std::vector<double> slopes;  ///< difference quotients at growing |lambda|
  bool converged = true;
};

inline constexpr double kSlopeTolerance = 1e-6;

/// lambda(U) from sampled slopes of psi (N = inf) at |lambda| = 10, 20, 40.
/// Throws NumericalError with the slopes when they have not settled.
LambdaEstimate lambda_of_U(const EntropyFunctional& U, double K);

/// int beta_t/rho_1 U(rho_1/beta_t) d pi over pairs with rho_1(x1) > 0, with
/// beta = inf read as U'(0). The x0 side is the same call on the reversed plan.
double distorted_term(const EntropyFunctional& U, const TransferencePlan& plan,
                      const MetricMeasureSpace& space, const CurvatureParams& params, double t,
                      const std::vector<double>& rho1);

struct CdCheck {
  std::string functional;
  int j = 0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  bool passed = false;
};

struct CdPlanResult {
  LiftSelection selection = LiftSelection::canonical;
  std::vector<CdCheck> checks;
  bool passed = false;
  std::size_t worst = 0;  ///< check with the smallest margin
};

enum class CdVerdict { certified, violated_on_this_plan };
std::string to_string(CdVerdict v);

struct CdOptions {
  Arithmetic mode = Arithmetic::exact;
  double tolerance = 1e-9;
};

struct CdReport {
  CurvatureParams params;
  ProbMeasure mu0;
  ProbMeasure mu1;
  TransferencePlan plan;
  double w2 = 0.0;
  int steps = 0;
  std::vector<CdPlanResult> plans;
  CdVerdict verdict = CdVerdict::violated_on_this_plan;
  double tolerance = 0.0;

  /// The first failed check of the first plan, when nothing certified.
  const CdCheck* witness() const;
};

/// Checks the distorted displacement convexity inequality for every U and
/// grid time along the canonical and uniform_split lifts of an optimal plan.
/// Certified when one lift passes everything.
CdReport verify_cd(const MetricMeasureSpace& space, const CurvatureParams& params,
                   const ProbMeasure& mu0, const ProbMeasure& mu1,
                   const std::vector<EntropyFunctional>& functionals, const GeodesicAtlas& atlas,
                   const CdOptions& options = {});

struct InftyCheck {
  int j = 0;
  double t = 0.0;
  double lhs = 0.0;
  double chord = 0.0;   ///< t U(mu1) + (1-t) U(mu0)
  double defect = 0.0;  ///< 1/2 lambda t (1-t) W2^2
  double rhs = 0.0;     ///< chord - defect + defect_tolerance |defect|
  double margin = 0.0;
  bool passed = false;
};

struct InftyConvexityReport {
  double K = 0.0;
  std::string functional;
  double lambda = 0.0;
  double w2 = 0.0;
  double defect_tolerance = 0.0;
  LiftSelection selection = LiftSelection::canonical;
  std::vector<InftyCheck> checks;
  bool passed = false;
};

struct InftyOptions {
  Arithmetic mode = Arithmetic::exact;
  double defect_tolerance = 0.0;  ///< relative slack on the defect term
  double tolerance = 1e-9;
};

/// U(mu_t) <= t U(mu1) + (1-t) U(mu0) - 1/2 lambda(U) t (1-t) W2^2 at every
/// grid time. Tries both lifts and reports the first that passes, otherwise
/// the canonical one.
InftyConvexityReport verify_infty_convexity(const MetricMeasureSpace& space, double K,
                                            const ProbMeasure& mu0, const ProbMeasure& mu1,
                                            const EntropyFunctional& U, const GeodesicAtlas& atlas,
                                            const InftyOptions& options = {});

struct DiameterReport {
  double diameter = 0.0;
  double bound = 0.0;  ///< pi sqrt((N-1)/K)
  double margin = 0.0;
  bool passed = false;
};

/// diam(supp nu) <= pi sqrt((N-1)/K) (plus kMetricTolerance). Throws
/// InputError unless K > 0 and N finite.
DiameterReport diameter_bound_check(const MetricMeasureSpace& space, double K, double N);

}  // namespace cdkit
