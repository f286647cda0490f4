#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/geodesics.hpp"
#include "support.hpp"

using namespace cdkit;
using cdkit::test::q;

namespace {

EnumerationOptions steps(int m, double tolerance = -1.0) {
  EnumerationOptions o;
  o.steps = m;
  o.tolerance = tolerance;
  return o;
}

// Brute force over every interior assignment, for cross-checking the
// pruned breadth-first search.
std::vector<DiscreteGeodesic> brute_force(const MetricMeasureSpace& s, Index a, Index b, int m) {
  const double tol = default_geodesic_tolerance(s) + 1e-12 * (1.0 + s.d(a, b));
  std::vector<DiscreteGeodesic> out;
  if (s.d(a, b) == 0.0) return {make_geodesic(s, std::vector<Index>(m + 1, a))};
  std::vector<Index> chain(m + 1, 0);
  chain.front() = a;
  chain.back() = b;
  const std::size_t n = s.size();
  std::size_t total = 1;
  for (int k = 1; k < m; ++k) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int k = 1; k < m; ++k) {
      chain[k] = c % n;
      c /= n;
    }
    auto g = make_geodesic(s, chain);
    if (geodesic_defect(s, g) <= tol) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// At the default tolerance (two mesh cells) lattice spaces admit many
// near-geodesic chains, so the uniqueness examples use exact tolerance.
TEST(Enumerate, IntervalFiveHasOneExactChain) {
  auto g = generate("interval:n=5");
  auto list = enumerate_geodesics(g.space, 0, 4, steps(4, kMetricTolerance));
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].chain, (std::vector<Index>{0, 1, 2, 3, 4}));
  EXPECT_GT(enumerate_geodesics(g.space, 0, 4, steps(4)).size(), 1u);
}

TEST(Enumerate, ZeroLengthPairGivesConstantChain) {
  auto g = generate("circle:n=8");
  auto list = enumerate_geodesics(g.space, 3, 3, steps(5));
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].chain, std::vector<Index>(6, 3));
  EXPECT_EQ(list[0].length, 0.0);
}

TEST(Enumerate, CircleFourAntipodesHaveBothArcs) {
  auto g = generate("circle:n=4");
  auto list = enumerate_geodesics(g.space, 0, 2, steps(2, kMetricTolerance));
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].chain, (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(list[1].chain, (std::vector<Index>{0, 3, 2}));
}

TEST(Enumerate, MatchesBruteForceOnSmallSpaces) {
  for (const char* spec : {"circle:n=6", "interval:n=5", "grid:n=3"}) {
    auto g = generate(spec);
    for (Index a = 0; a < g.space.size(); ++a)
      for (Index b = 0; b < g.space.size(); ++b)
        EXPECT_EQ(enumerate_geodesics(g.space, a, b, steps(3)), brute_force(g.space, a, b, 3)) << spec << " " << a << "," << b;
  }
}

TEST(Enumerate, BudgetIsExplicit) {
  auto g = generate("grid:n=4");
  EnumerationOptions o = steps(6);
  o.budget = 5;
  EXPECT_THROW(enumerate_geodesics(g.space, 0, 15, o), BudgetExceeded);
}

TEST(Enumerate, ReversalClosure) {
  auto g = generate("circle:n=8");
  auto atlas = enumerate_atlas(g.space, steps(4));
  for (const auto& [key, list] : atlas.entries()) {
    const auto& back = atlas.at(key.second, key.first);
    ASSERT_EQ(list.size(), back.size());
    for (const auto& geo : list) EXPECT_TRUE(std::binary_search(back.begin(), back.end(), geo.reversed()));
  }
}

TEST(Evaluate, EndpointsAndMidpoint) {
  auto g = generate("interval:n=5");
  auto geo = enumerate_geodesics(g.space, 0, 4, steps(4, kMetricTolerance)).front();
  EXPECT_EQ(evaluate(geo, 0), 0u);
  EXPECT_EQ(evaluate(geo, 4), 4u);
  EXPECT_EQ(evaluate(geo, 2), 2u);  // the point 0.5
  EXPECT_THROW(evaluate(geo, 5), InputError);
  EXPECT_THROW(evaluate(geo, -1), InputError);
  EXPECT_EQ(endpoints(geo), std::make_pair(Index{0}, Index{4}));
}

TEST(Uniqueness, IntervalIsUnique) {
  auto g = generate("interval:n=5,m=4");
  auto r = uniqueness_report(*g.atlas, g.space);
  EXPECT_EQ(r.unique_pair_mass, q(1));
  EXPECT_TRUE(r.ambiguous_pairs.empty());
}

TEST(Uniqueness, CircleFourAntipodesCarryAQuarter) {
  auto g = generate("circle:n=4,m=2");
  auto r = uniqueness_report(*g.atlas, g.space);
  EXPECT_EQ(r.unique_pair_mass, q(3, 4));
  ASSERT_EQ(r.ambiguous_pairs.size(), 4u);
  for (const auto& p : r.ambiguous_pairs) EXPECT_EQ(p.count, 2u);
}

TEST(Uniqueness, OnePointSpace) {
  auto s = test::space({{0}}, {q(1)});
  auto atlas = enumerate_atlas(s, steps(3));
  EXPECT_EQ(uniqueness_report(atlas, s).unique_pair_mass, q(1));
}

TEST(Uniqueness, PartialAtlasNamesMissingPair) {
  auto g = generate("interval:n=3");
  GeodesicAtlas atlas(2, AtlasProvenance::enumerated);
  atlas.set(0, 0, enumerate_geodesics(g.space, 0, 0, steps(2)));
  try {
    uniqueness_report(atlas, g.space);
    FAIL() << "expected AtlasError";
  } catch (const AtlasError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
  }
}

// Every stored chain with endpoints in B(x, r) stays inside B(x, 2r).
TEST(Properties, ContainmentInDoubledBall) {
  for (const char* spec : {"interval:n=9,m=8", "circle:n=16,m=8", "grid:n=5,m=8"}) {
    auto g = generate(spec);
    ASSERT_TRUE(g.atlas);
    for (const auto* atlas : {&*g.atlas}) {
      for (const auto& [key, list] : atlas->entries())
        for (const auto& geo : list) {
          for (Index x = 0; x < g.space.size(); ++x) {
            double r = std::max(g.space.d(x, key.first), g.space.d(x, key.second)) + 1e-9;
            for (Index p : geo.chain) EXPECT_LT(g.space.d(x, p), 2 * r) << spec;
          }
        }
    }
  }
}

TEST(Properties, SubchainsStayConstantSpeed) {
  auto g = generate("circle:n=12");
  auto atlas = enumerate_atlas(g.space, steps(6));
  const double tol = default_geodesic_tolerance(g.space);
  for (const auto& [key, list] : atlas.entries())
    for (const auto& geo : list)
      for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b <= 6; ++b) {
          std::vector<Index> sub(geo.chain.begin() + a, geo.chain.begin() + b + 1);
          // The sub-chain has b-a steps; its tolerance scales with the span.
          EXPECT_LE(geodesic_defect(g.space, make_geodesic(g.space, sub)), 2 * tol);
        }
}

TEST(Analytic, IntervalAndCircleAtlasesAreGeodesics) {
  for (const char* spec : {"interval:n=9,m=8", "interval:n=17,m=8", "circle:n=16,m=8", "circle:n=64,m=8",
                           "gaussline:n=81,m=8", "grid:n=5,m=8"}) {
    auto g = generate(spec);
    ASSERT_TRUE(g.atlas) << spec;
    EXPECT_EQ(g.atlas->provenance(), AtlasProvenance::analytic);
    const double tol = default_geodesic_tolerance(g.space);
    EXPECT_EQ(g.atlas->pair_count(), g.space.size() * g.space.size()) << spec;
    for (const auto& [key, list] : g.atlas->entries())
      for (const auto& geo : list) {
        EXPECT_EQ(geo.start(), key.first);
        EXPECT_EQ(geo.end(), key.second);
        EXPECT_LE(geodesic_defect(g.space, geo), tol) << spec << " " << key.first << "," << key.second;
      }
  }
}

TEST(Analytic, IntervalAtlasAgreesWithEnumeration) {
  // Pairs whose gap divides evenly have a unique exact chain, and the
  // analytic atlas must pick it.
  auto g = generate("interval:n=5,m=4");
  for (Index a = 0; a < 5; ++a)
    for (Index b = 0; b < 5; ++b) {
      auto exact = enumerate_geodesics(g.space, a, b, steps(4, kMetricTolerance));
      if (exact.empty()) continue;
      ASSERT_EQ(exact.size(), 1u);
      EXPECT_EQ(g.atlas->at(a, b), exact) << a << "," << b;
    }
}

TEST(Analytic, CircleStoresBothAntipodalArcs) {
  auto g = generate("circle:n=8,m=4");
  EXPECT_EQ(g.atlas->at(0, 4).size(), 2u);
  EXPECT_EQ(g.atlas->at(0, 3).size(), 1u);
  EXPECT_EQ(g.atlas->at(0, 3).front().chain, (std::vector<Index>{0, 1, 2, 2, 3}));
}

TEST(Atlas, MissingPairThrowsAtlasError) {
  GeodesicAtlas atlas(4, AtlasProvenance::enumerated);
  EXPECT_FALSE(atlas.contains(0, 1));
  EXPECT_THROW(atlas.at(0, 1), AtlasError);
}
