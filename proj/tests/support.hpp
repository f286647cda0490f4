#pragma once

#include <string>
#include <vector>

#include "cdkit/rational.hpp"
#include "cdkit/space.hpp"

namespace cdkit::test {

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

inline std::vector<Rational> uniform_weights(std::size_t n) {
  return std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n)));
}

// Float distances, exact weights.
inline MetricMeasureSpace space(const std::vector<std::vector<double>>& d, std::vector<Rational> nu) {
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  return MetricMeasureSpace(ids(d.size()), std::move(flat), std::move(nu), true);
}

// Exact distances given as rationals, exact weights.
inline MetricMeasureSpace exact_space(const std::vector<std::vector<Rational>>& d, std::vector<Rational> nu) {
  std::vector<double> flat;
  std::vector<Rational> exact;
  for (const auto& row : d)
    for (const auto& q : row) {
      flat.push_back(q.get_d());
      exact.push_back(q);
    }
  return MetricMeasureSpace(ids(d.size()), std::move(flat), std::move(nu), true, exact);
}

inline Rational q(long p, unsigned long den = 1) {
  Rational r(p, den);
  r.canonicalize();
  return r;
}

}  // namespace cdkit::test
