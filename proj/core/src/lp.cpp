#include "cdkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdkit/error.hpp"

namespace cdkit {

std::size_t LinearProgram::add_variable(const Rational& cost) {
  objective.push_back(cost);
  return variable_count++;
}

void LinearProgram::add_constraint(LinearConstraint constraint) { constraints.push_back(std::move(constraint)); }

std::size_t LinearProgram::nonzeros() const {
  std::size_t nz = 0;
  for (const auto& c : constraints)
    for (const auto& [j, a] : c.terms) nz += a != 0;
  return nz;
}

void LinearProgram::check() const {
  if (objective.size() != variable_count)
    throw InputError("objective has " + std::to_string(objective.size()) + " entries for " +
                     std::to_string(variable_count) + " variables");
  for (const auto& c : constraints)
    for (const auto& [j, a] : c.terms)
      if (j >= variable_count) throw InputError("constraint refers to variable " + std::to_string(j) + " out of range");
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

template <typename T>
struct Num;

template <>
struct Num<Rational> {
  static Rational from(const Rational& q) { return q; }
  static Rational to_rational(const Rational& q) { return q; }
  static bool pos(const Rational& v, double) { return sgn(v) > 0; }
  static bool neg(const Rational& v, double) { return sgn(v) < 0; }
  static bool zero(const Rational& v, double) { return sgn(v) == 0; }
};

template <>
struct Num<double> {
  static double from(const Rational& q) { return q.get_d(); }
  static Rational to_rational(double v) { return exact_rational(v); }
  static bool pos(double v, double eps) { return v > eps; }
  static bool neg(double v, double eps) { return v < -eps; }
  static bool zero(double v, double eps) { return std::abs(v) <= eps; }
};

enum class Outcome { optimal, unbounded, limit };

template <typename T>
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opt) : opt_(opt), eps_(opt.epsilon) {
    rows_ = lp.constraints.size();
    n_ = lp.variable_count;
    // Columns: originals, one slack per inequality row, one artificial per row.
    std::size_t slacks = 0;
    for (const auto& c : lp.constraints) slacks += c.relation != Relation::equal;
    art0_ = n_ + slacks;
    cols_ = art0_ + rows_;
    width_ = cols_ + 1;
    tab_.assign(rows_ * width_, T(0));
    flipped_.assign(rows_, false);
    basis_.resize(rows_);

    std::size_t s = n_;
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto& c = lp.constraints[i];
      for (const auto& [j, a] : c.terms) at(i, j) += Num<T>::from(a);
      if (c.relation == Relation::less_equal) at(i, s++) = T(1);
      if (c.relation == Relation::greater_equal) at(i, s++) = T(-1);
      rhs(i) = Num<T>::from(c.rhs);
      if (c.rhs < 0) {
        flipped_[i] = true;
        for (std::size_t j = 0; j < width_; ++j) at(i, j) = -at(i, j);
      }
      at(i, art0_ + i) = T(1);
      basis_[i] = art0_ + i;
    }
    limit_ = opt.iteration_limit ? opt.iteration_limit : 50 * (rows_ + cols_) + 100;
  }

  Outcome run(const std::vector<T>& cost, bool allow_artificial) {
    cost_ = cost;
    std::size_t degenerate_run = 0;
    bool bland = opt_.rule == PivotRule::bland || std::is_same_v<T, Rational>;
    std::vector<T> rc(cols_);
    for (;;) {
      if (iterations_ >= limit_) return Outcome::limit;
      // Reduced costs c_j - c_B B^-1 A_j.
      for (std::size_t j = 0; j < cols_; ++j) rc[j] = cost_[j];
      for (std::size_t i = 0; i < rows_; ++i) {
        const T& cb = cost_[basis_[i]];
        if (Num<T>::zero(cb, 0.0)) continue;
        const T* row = &tab_[i * width_];
        for (std::size_t j = 0; j < cols_; ++j)
          if (!Num<T>::zero(row[j], 0.0)) rc[j] -= cb * row[j];
      }
      std::size_t enter = cols_;
      std::size_t limit_col = allow_artificial ? cols_ : art0_;
      if (bland || degenerate_run > 50) {
        for (std::size_t j = 0; j < limit_col; ++j)
          if (Num<T>::neg(rc[j], eps_)) {
            enter = j;
            break;
          }
      } else {
        T best = T(0);
        for (std::size_t j = 0; j < limit_col; ++j)
          if (Num<T>::neg(rc[j], eps_) && rc[j] < best) {
            best = rc[j];
            enter = j;
          }
      }
      if (enter == cols_) return Outcome::optimal;

      std::size_t leave = rows_;
      T best_ratio = T(0);
      for (std::size_t i = 0; i < rows_; ++i) {
        const T& a = at(i, enter);
        if (!Num<T>::pos(a, eps_)) continue;
        T ratio = rhs(i) / a;
        if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return Outcome::unbounded;
      degenerate_run = Num<T>::zero(best_ratio, eps_) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++iterations_;
    T* prow = &tab_[r * width_];
    T inv = T(1) / prow[c];
    for (std::size_t j = 0; j < width_; ++j)
      if (!Num<T>::zero(prow[j], 0.0)) prow[j] *= inv;
    prow[c] = T(1);
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j)
      if (!Num<T>::zero(prow[j], 0.0)) nz.push_back(j);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      T* row = &tab_[i * width_];
      if (Num<T>::zero(row[c], 0.0)) continue;
      T f = row[c];
      for (std::size_t j : nz) row[j] -= f * prow[j];
      row[c] = T(0);
      if constexpr (std::is_same_v<T, double>) {
        if (std::abs(row[cols_]) < 1e-14) row[cols_] = 0.0;
      }
    }
    basis_[r] = c;
  }

  // Moves zero-level artificials out of the basis where a structural pivot
  // exists. Rows without one are redundant; their artificial stays at zero.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < art0_) continue;
      for (std::size_t j = 0; j < art0_; ++j)
        if (!Num<T>::zero(at(i, j), eps_)) {
          pivot(i, j);
          break;
        }
    }
  }

  T phase_one_value() const {
    T v = T(0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] >= art0_) v += rhs(i);
    return v;
  }

  std::vector<T> primal() const {
    std::vector<T> x(cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = rhs(i);
    return x;
  }

  // y = c_B B^-1, read from the artificial columns, in input row orientation.
  std::vector<T> duals() const {
    std::vector<T> y(rows_, T(0));
    for (std::size_t k = 0; k < rows_; ++k) {
      const T& cb = cost_[basis_[k]];
      if (Num<T>::zero(cb, 0.0)) continue;
      for (std::size_t i = 0; i < rows_; ++i) y[i] += cb * at(k, art0_ + i);
    }
    for (std::size_t i = 0; i < rows_; ++i)
      if (flipped_[i]) y[i] = -y[i];
    return y;
  }

  std::size_t cols() const { return cols_; }
  std::size_t art0() const { return art0_; }
  std::size_t iterations() const { return iterations_; }

 private:
  T& at(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return tab_[i * width_ + j]; }
  T& rhs(std::size_t i) { return tab_[i * width_ + cols_]; }
  const T& rhs(std::size_t i) const { return tab_[i * width_ + cols_]; }

  const LpOptions& opt_;
  double eps_;
  std::size_t rows_ = 0, n_ = 0, art0_ = 0, cols_ = 0, width_ = 0;
  std::vector<T> tab_;
  std::vector<bool> flipped_;
  std::vector<std::size_t> basis_;
  std::vector<T> cost_;
  std::size_t iterations_ = 0;
  std::size_t limit_ = 0;
};

// Residual, duality gap and dual feasibility against the input data.
void certify(const LinearProgram& lp, LpSolution& s) {
  const bool exact = s.mode == Arithmetic::exact;
  double bnorm = 0.0, cnorm = 0.0;
  for (const auto& c : lp.constraints) bnorm = std::max(bnorm, std::abs(c.rhs.get_d()));
  for (const auto& c : lp.objective) cnorm = std::max(cnorm, std::abs(c.get_d()));

  bool primal_ok = true;
  s.residual = 0.0;
  for (const auto& x : s.values)
    if (x < 0) {
      primal_ok = false;
      s.residual = std::max(s.residual, -x.get_d());
    }
  Rational by = 0;
  std::vector<Rational> aty(lp.variable_count);
  bool dual_sign_ok = true;
  s.dual_infeasibility = 0.0;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    const Rational& y = s.duals[i];
    Rational lhs = 0;
    for (const auto& [j, a] : c.terms) {
      lhs += a * s.values[j];
      aty[j] += a * y;
    }
    Rational viol = 0;
    if (c.relation == Relation::equal) viol = abs(lhs - c.rhs);
    if (c.relation == Relation::less_equal && lhs > c.rhs) viol = lhs - c.rhs;
    if (c.relation == Relation::greater_equal && lhs < c.rhs) viol = c.rhs - lhs;
    if (viol > 0) primal_ok = false;
    s.residual = std::max(s.residual, viol.get_d());
    if (c.relation == Relation::less_equal && y > 0) {
      dual_sign_ok = false;
      s.dual_infeasibility = std::max(s.dual_infeasibility, y.get_d());
    }
    if (c.relation == Relation::greater_equal && y < 0) {
      dual_sign_ok = false;
      s.dual_infeasibility = std::max(s.dual_infeasibility, -y.get_d());
    }
    by += c.rhs * y;
  }
  bool reduced_ok = true;
  for (std::size_t j = 0; j < lp.variable_count; ++j) {
    Rational r = lp.objective[j] - aty[j];
    if (r < 0) {
      reduced_ok = false;
      s.dual_infeasibility = std::max(s.dual_infeasibility, -r.get_d());
    }
  }
  Rational gap = s.objective - by;
  s.duality_gap = std::abs(gap.get_d());
  if (exact) {
    s.certified = primal_ok && dual_sign_ok && reduced_ok && gap == 0;
  } else {
    s.certified = s.residual <= 1e-9 * (1.0 + bnorm) && s.duality_gap <= 1e-8 * (1.0 + std::abs(s.objective.get_d())) &&
                  s.dual_infeasibility <= 1e-8 * (1.0 + cnorm + bnorm);
  }
}

template <typename T>
LpSolution solve_with(const LinearProgram& lp, const LpOptions& opt) {
  LpSolution sol;
  sol.mode = opt.mode;
  Simplex<T> sx(lp, opt);
  const std::size_t cols = sx.cols();

  std::vector<T> phase1(cols, T(0));
  for (std::size_t j = sx.art0(); j < cols; ++j) phase1[j] = T(1);
  Outcome o = sx.run(phase1, true);
  sol.iterations = sx.iterations();
  if (o == Outcome::limit) {
    sol.status = LpStatus::stalled;
    return sol;
  }
  T infeas = sx.phase_one_value();
  double tol = std::is_same_v<T, double> ? 1e-9 : 0.0;
  if (!Num<T>::zero(infeas, tol)) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  sx.expel_artificials();

  std::vector<T> cost(cols, T(0));
  for (std::size_t j = 0; j < lp.variable_count; ++j) cost[j] = Num<T>::from(lp.objective[j]);
  o = sx.run(cost, false);
  sol.iterations = sx.iterations();
  if (o == Outcome::limit) {
    sol.status = LpStatus::stalled;
    return sol;
  }
  if (o == Outcome::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  std::vector<T> x = sx.primal();
  sol.values.resize(lp.variable_count);
  for (std::size_t j = 0; j < lp.variable_count; ++j) {
    T v = x[j];
    if constexpr (std::is_same_v<T, double>) {
      if (v < 0 && v > -1e-12) v = 0.0;
    }
    sol.values[j] = Num<T>::to_rational(v);
  }
  sol.objective = 0;
  for (std::size_t j = 0; j < lp.variable_count; ++j) sol.objective += lp.objective[j] * sol.values[j];
  for (const T& y : sx.duals()) sol.duals.push_back(Num<T>::to_rational(y));
  certify(lp, sol);
  sol.status = sol.certified ? LpStatus::optimal : LpStatus::stalled;
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.check();
  if (lp.nonzeros() > options.nonzero_limit)
    throw BudgetExceeded("linear program has " + std::to_string(lp.nonzeros()) + " nonzeros, limit " +
                         std::to_string(options.nonzero_limit));
  if (options.mode == Arithmetic::exact) return solve_with<Rational>(lp, options);
  return solve_with<double>(lp, options);
}

}  // namespace cdkit
