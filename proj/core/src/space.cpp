#include "cdkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdkit/error.hpp"

namespace cdkit {

MetricMeasureSpace::MetricMeasureSpace(std::vector<std::string> ids, std::vector<double> dist,
                                       std::vector<Rational> nu, bool nu_exact,
                                       std::optional<std::vector<Rational>> dist_exact)
    : ids_(std::move(ids)),
      dist_(std::move(dist)),
      dist_exact_(std::move(dist_exact)),
      nu_(std::move(nu)),
      nu_exact_(nu_exact) {
  const std::size_t n = ids_.size();
  if (n == 0) throw InputError("a space needs at least one point");
  if (dist_.size() != n * n)
    throw InputError("distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                     std::to_string(n * n));
  if (dist_exact_ && dist_exact_->size() != n * n)
    throw InputError("exact distance matrix has the wrong shape");
  if (nu_.size() != n)
    throw InputError("measure has " + std::to_string(nu_.size()) + " entries, expected " +
                     std::to_string(n));
  for (double v : dist_)
    if (!std::isfinite(v)) throw InputError("distance matrix contains a non-finite entry");

  nu_double_ = to_doubles(nu_);
  for (Index i = 0; i < n; ++i)
    if (nu_[i] > 0) support_.push_back(i);

  for (Index i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, d(i, j));
    if (n > 1) mesh_ = std::max(mesh_, nearest);
  }
}

Rational MetricMeasureSpace::d_exact(Index i, Index j) const {
  if (dist_exact_) return (*dist_exact_)[i * size() + j];
  return exact_rational(d(i, j));
}

double MetricMeasureSpace::support_diameter() const {
  double best = 0.0;
  for (Index a : support_)
    for (Index b : support_) best = std::max(best, d(a, b));
  return best;
}

double MetricMeasureSpace::diameter() const {
  double best = 0.0;
  for (double v : dist_) best = std::max(best, v);
  return best;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::shape: return "shape";
    case ViolationKind::negative_distance: return "negative_distance";
    case ViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case ViolationKind::asymmetric: return "asymmetric";
    case ViolationKind::coincident_points: return "coincident_points";
    case ViolationKind::triangle: return "triangle";
    case ViolationKind::negative_mass: return "negative_mass";
    case ViolationKind::total_mass: return "total_mass";
  }
  return "unknown";
}

namespace {

// Keeps the worst witness per violation kind.
class Collector {
 public:
  void add(ViolationKind kind, double amount, std::vector<Index> witness) {
    for (auto& v : found_) {
      if (v.kind == kind) {
        if (amount > v.amount) {
          v.amount = amount;
          v.witness = std::move(witness);
        }
        return;
      }
    }
    found_.push_back({kind, {}, std::move(witness), amount});
  }

  std::vector<Violation> finish(const MetricMeasureSpace& s) {
    for (auto& v : found_) {
      std::string w;
      for (Index i : v.witness) w += (w.empty() ? "" : ", ") + s.id(i);
      switch (v.kind) {
        case ViolationKind::triangle:
          v.message = "d(" + s.id(v.witness[0]) + "," + s.id(v.witness[2]) + ") exceeds d(" +
                      s.id(v.witness[0]) + "," + s.id(v.witness[1]) + ") + d(" + s.id(v.witness[1]) +
                      "," + s.id(v.witness[2]) + ")";
          break;
        case ViolationKind::total_mass: v.message = "reference measure does not sum to 1"; break;
        default: v.message = std::string(to_string(v.kind)) + " at (" + w + ")"; break;
      }
    }
    std::sort(found_.begin(), found_.end(),
              [](const Violation& a, const Violation& b) { return a.kind < b.kind; });
    return std::move(found_);
  }

 private:
  std::vector<Violation> found_;
};

}  // namespace

ValidationReport validate_space(const MetricMeasureSpace& s) {
  const std::size_t n = s.size();
  ValidationReport report;
  report.exact = s.has_exact_distances();
  Collector c;

  if (report.exact) {
    std::vector<Rational> D(n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) D[i * n + j] = s.d_exact(i, j);
    for (Index i = 0; i < n; ++i) {
      if (D[i * n + i] != 0) c.add(ViolationKind::nonzero_diagonal, std::abs(s.d(i, i)), {i});
      for (Index j = 0; j < n; ++j) {
        const Rational& dij = D[i * n + j];
        if (dij < 0) c.add(ViolationKind::negative_distance, -s.d(i, j), {i, j});
        if (j > i && dij != D[j * n + i])
          c.add(ViolationKind::asymmetric, std::abs(s.d(i, j) - s.d(j, i)), {i, j});
        if (j != i && dij == 0) c.add(ViolationKind::coincident_points, 0.0, {i, j});
      }
    }
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k)
        for (Index j = 0; j < n; ++j) {
          Rational excess = D[i * n + j] - D[i * n + k] - D[k * n + j];
          if (excess > 0) c.add(ViolationKind::triangle, excess.get_d(), {i, k, j});
        }
  } else {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(s.d(i, i)) > kMetricTolerance)
        c.add(ViolationKind::nonzero_diagonal, std::abs(s.d(i, i)), {i});
      for (Index j = 0; j < n; ++j) {
        double dij = s.d(i, j);
        if (dij < -kMetricTolerance) c.add(ViolationKind::negative_distance, -dij, {i, j});
        double asym = std::abs(dij - s.d(j, i));
        if (j > i && asym > kMetricTolerance) c.add(ViolationKind::asymmetric, asym, {i, j});
        if (j != i && std::abs(dij) <= kMetricTolerance)
          c.add(ViolationKind::coincident_points, 0.0, {i, j});
      }
    }
    const double* D = s.distances().data();
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k) {
        const double dik = D[i * n + k];
        const double* row_k = D + k * n;
        const double* row_i = D + i * n;
        for (Index j = 0; j < n; ++j) {
          double excess = row_i[j] - dik - row_k[j];
          if (excess > kMetricTolerance) c.add(ViolationKind::triangle, excess, {i, k, j});
        }
      }
  }

  Rational total = 0;
  for (Index i = 0; i < n; ++i) {
    if (s.nu(i) < 0) c.add(ViolationKind::negative_mass, -s.nu_value(i), {i});
    total += s.nu(i);
  }
  Rational gap = total - 1;
  double gap_d = std::abs(gap.get_d());
  if (s.has_exact_measure() ? gap != 0 : gap_d > kMassTolerance)
    c.add(ViolationKind::total_mass, gap_d, {});

  report.violations = c.finish(s);
  return report;
}

bool Ball::contains(Index i) const { return std::binary_search(members.begin(), members.end(), i); }

namespace {

Ball make_ball(const MetricMeasureSpace& s, Index center, double radius, bool closed) {
  if (center >= s.size()) throw InputError("ball center " + std::to_string(center) + " out of range");
  if (!(radius > 0)) throw InputError("ball radius must be positive");
  Ball b;
  b.center = center;
  b.radius = radius;
  b.mass = 0;
  for (Index i = 0; i < s.size(); ++i) {
    double d = s.d(center, i);
    // Distances within kMetricTolerance of the radius count as on the sphere.
    bool in = closed ? d <= radius + kMetricTolerance : d < radius - kMetricTolerance;
    if (in) {
      b.members.push_back(i);
      b.mass += s.nu(i);
    }
  }
  return b;
}

}  // namespace

Ball ball(const MetricMeasureSpace& s, Index center, double radius) {
  return make_ball(s, center, radius, false);
}

Ball closed_ball(const MetricMeasureSpace& s, Index center, double radius) {
  return make_ball(s, center, radius, true);
}

Ball whole_space_ball(const MetricMeasureSpace& s) { return ball(s, 0, s.diameter() + 1.0); }

double doubling_constant(const MetricMeasureSpace& s, std::span<const double> radii) {
  if (radii.empty()) throw InputError("doubling constant needs at least one radius");
  double best = 0.0;
  bool any = false;
  for (double r : radii) {
    for (Index x = 0; x < s.size(); ++x) {
      Ball b = ball(s, x, r);
      if (b.mass == 0) continue;
      Ball b2 = ball(s, x, 2 * r);
      Rational q = b2.mass / b.mass;
      best = std::max(best, q.get_d());
      any = true;
    }
  }
  if (!any) throw InputError("every sampled ball has zero mass");
  return best;
}

}  // namespace cdkit
