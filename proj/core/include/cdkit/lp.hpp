#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cdkit/rational.hpp"

namespace cdkit {

enum class Arithmetic { exact, floating };

enum class Relation { less_equal, greater_equal, equal };

enum class PivotRule {
  bland,
  /// Most negative reduced cost; falls back to Bland's rule after a run of
  /// degenerate pivots. Float mode only.
  dantzig,
};

/// Default guard on constraint-matrix nonzeros.
inline constexpr std::size_t kDefaultLpNonzeroLimit = 50'000;

struct LinearConstraint {
  std::vector<std::pair<std::size_t, Rational>> terms;  ///< (variable, coefficient)
  Relation relation = Relation::equal;
  Rational rhs;
};

/// minimize objective . x  subject to constraints, x >= 0.
struct LinearProgram {
  std::size_t variable_count = 0;
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;

  std::size_t add_variable(const Rational& cost);
  void add_constraint(LinearConstraint constraint);
  std::size_t nonzeros() const;
  /// Throws InputError on inconsistent dimensions or out-of-range variables.
  void check() const;
};

enum class LpStatus { optimal, infeasible, unbounded, stalled };

const char* to_string(LpStatus status);

struct LpOptions {
  Arithmetic mode = Arithmetic::exact;
  PivotRule rule = PivotRule::bland;
  std::size_t nonzero_limit = kDefaultLpNonzeroLimit;
  /// Pivot tolerance in float mode.
  double epsilon = 1e-11;
  /// 0 means 50 * (rows + columns).
  std::size_t iteration_limit = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Arithmetic mode = Arithmetic::exact;
  /// Primal values. In float mode these are the exact binary values of the
  /// doubles the solver produced.
  std::vector<Rational> values;
  Rational objective;
  /// One dual value per constraint, in the orientation of the input rows.
  std::vector<Rational> duals;
  /// max constraint violation of `values` against the input rows.
  double residual = 0.0;
  /// objective - rhs . duals, recomputed from the input data.
  double duality_gap = 0.0;
  /// max violation of dual feasibility, recomputed from the input data.
  double dual_infeasibility = 0.0;
  /// Residual, gap and dual feasibility all within tolerance (zero in exact
  /// mode).
  bool certified = false;
  std::size_t iterations = 0;

  double objective_value() const { return objective.get_d(); }
  double value(std::size_t j) const { return values[j].get_d(); }
};

/// Two-phase dense-tableau simplex. Throws BudgetExceeded when the program
/// has more nonzeros than options.nonzero_limit. A float-mode run that hits
/// the iteration limit or fails certification is reported as `stalled`,
/// never as optimal.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace cdkit
