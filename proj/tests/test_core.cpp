#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <numbers>

#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/rational.hpp"
#include "cdkit/space.hpp"
#include "support.hpp"

using namespace cdkit;
using cdkit::test::q;

TEST(Rational, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-2/7"), Rational(-2, 7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));  // not the nearest double
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
  EXPECT_EQ(to_string(q(6, 4)), "3/2");
}

TEST(Validate, ConsistentThreePointSpacePasses) {
  auto s = test::space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, test::uniform_weights(3));
  auto r = validate_space(s);
  EXPECT_TRUE(r.passed());
}

TEST(Validate, TriangleViolationReportsWitness) {
  // d(1,2)=5, d(1,3)=1, d(3,2)=1 in one-based labels.
  auto s = test::space({{0, 5, 1}, {5, 0, 1}, {1, 1, 0}}, test::uniform_weights(3));
  auto r = validate_space(s);
  ASSERT_FALSE(r.passed());
  ASSERT_EQ(r.violations.size(), 1u);
  const auto& v = r.violations.front();
  EXPECT_EQ(v.kind, ViolationKind::triangle);
  ASSERT_EQ(v.witness.size(), 3u);
  EXPECT_EQ(v.witness[1], 2u);
  EXPECT_NE(v.witness[0], v.witness[2]);
  EXPECT_DOUBLE_EQ(v.amount, 3.0);
}

TEST(Validate, MassViolationReportsTotal) {
  auto s = test::space({{0, 1}, {1, 0}}, {parse_rational("0.5"), parse_rational("0.6")});
  auto r = validate_space(s);
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.violations.front().kind, ViolationKind::total_mass);
  EXPECT_NEAR(r.violations.front().amount, 0.1, 1e-15);
}

TEST(Validate, ReportsEachAxiomOnce) {
  auto s = test::space({{0, -1, 0}, {2, 1, 3}, {0, 3, 0}}, {q(-1, 2), q(1), q(1, 4)});
  auto r = validate_space(s);
  std::set<ViolationKind> kinds;
  for (const auto& v : r.violations) EXPECT_TRUE(kinds.insert(v.kind).second);
  EXPECT_TRUE(kinds.count(ViolationKind::negative_distance));
  EXPECT_TRUE(kinds.count(ViolationKind::nonzero_diagonal));
  EXPECT_TRUE(kinds.count(ViolationKind::asymmetric));
  EXPECT_TRUE(kinds.count(ViolationKind::coincident_points));
  EXPECT_TRUE(kinds.count(ViolationKind::negative_mass));
  EXPECT_TRUE(kinds.count(ViolationKind::total_mass));
}

TEST(Validate, ShapeErrorsThrowAtConstruction) {
  EXPECT_THROW(MetricMeasureSpace(test::ids(2), {0, 1, 1}, test::uniform_weights(2), true), InputError);
  EXPECT_THROW(MetricMeasureSpace(test::ids(2), {0, 1, 1, 0}, test::uniform_weights(3), true), InputError);
}

TEST(Ball, IntervalFiveMiddleBall) {
  auto g = generate("interval:n=5");
  auto b = ball(g.space, 2, 0.3);
  EXPECT_EQ(b.members, (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(b.mass, q(3, 5));
}

TEST(Ball, LargeAndSmallRadii) {
  auto g = generate("interval:n=5");
  auto big = ball(g.space, 0, 5.0);
  EXPECT_EQ(big.members.size(), 5u);
  EXPECT_EQ(big.mass, q(1));
  auto small = ball(g.space, 3, 0.1);
  EXPECT_EQ(small.members, (std::vector<Index>{3}));
  EXPECT_THROW(ball(g.space, 0, 0.0), InputError);
  EXPECT_THROW(ball(g.space, 7, 1.0), InputError);
}

TEST(Ball, OpenExcludesBoundaryClosedIncludesIt) {
  auto g = generate("interval:n=5");
  auto open = ball(g.space, 2, 0.25);
  auto closed = closed_ball(g.space, 2, 0.25);
  EXPECT_EQ(open.members, (std::vector<Index>{2}));
  EXPECT_EQ(closed.members, (std::vector<Index>{1, 2, 3}));
  EXPECT_NE(open.mass, closed.mass);
}

TEST(Ball, MembersMonotoneInRadius) {
  auto g = generate("grid:n=6");
  for (Index c : {0u, 7u, 20u}) {
    std::vector<Index> prev;
    for (double r = 0.05; r < 2.0; r += 0.07) {
      auto b = ball(g.space, c, r);
      EXPECT_TRUE(std::includes(b.members.begin(), b.members.end(), prev.begin(), prev.end()));
      prev = b.members;
    }
  }
}

// Oracle: count points by hand from the generator coordinates, through the
// model distance rather than the distance matrix.
double lattice_doubling(const GeneratedSpace& g, const std::vector<double>& radii) {
  double D = 1.0;
  const std::size_t n = g.coords.size();
  for (double r : radii)
    for (std::size_t c = 0; c < n; ++c) {
      double small = 0, big = 0;
      for (std::size_t x = 0; x < n; ++x) {
        double d = model_distance(g.model, g.coords[c], g.coords[x]);
        if (d < r) small += 1;
        if (d < 2 * r) big += 1;
      }
      D = std::max(D, big / small);
    }
  return D;
}

TEST(Doubling, CircleMatchesLatticeCount) {
  auto g = generate("circle:n=64");
  std::vector<double> radii;
  const double mesh = g.space.mesh();
  for (double r = 2.1 * mesh; r < std::numbers::pi; r += 0.37 * mesh) radii.push_back(r);
  double D = doubling_constant(g.space, radii);
  EXPECT_NEAR(D, lattice_doubling(g, radii), 1e-12);
  // Open balls with r just above 2 mesh hold 5 points, 2r holds 9.
  EXPECT_GE(D, 2.0);
  EXPECT_LE(D, 9.0 / 5.0 + 1.0);
}

TEST(Doubling, GridMatchesLatticeCount) {
  auto g = generate("grid:n=8");
  std::vector<double> radii;
  for (double r = 0.05; r < 1.5; r += 0.013) radii.push_back(r);
  double D = doubling_constant(g.space, radii);
  EXPECT_NEAR(D, lattice_doubling(g, radii), 1e-12);
  // A singleton ball doubles into the 3x3 block around its centre.
  EXPECT_DOUBLE_EQ(D, 9.0);
}

TEST(Doubling, SinglePointSupportIsOne) {
  auto s = test::space({{0, 1}, {1, 0}}, {q(1), q(0)});
  std::vector<double> radii{0.5, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(doubling_constant(s, radii), 1.0);
}

TEST(Doubling, MonotoneUnderRefinementAndErrors) {
  auto g = generate("circle:n=32");
  std::vector<double> coarse{0.3, 0.9}, fine{0.3, 0.5, 0.9, 1.3};
  EXPECT_LE(doubling_constant(g.space, coarse), doubling_constant(g.space, fine));
  std::vector<double> none;
  EXPECT_THROW(doubling_constant(g.space, none), InputError);
  auto s = test::space({{0, 1}, {1, 0}}, {q(1), q(0)});
  std::vector<double> r{0.5};
  // Balls around the null point with radius 0.5 have zero mass, but the
  // support point still gives a sample.
  EXPECT_DOUBLE_EQ(doubling_constant(s, r), 1.0);
}

TEST(Generate, CircleFourAntipodalDistance) {
  auto g = generate("circle:n=4");
  EXPECT_NEAR(g.space.d(0, 2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(g.space.d(0, 1), std::numbers::pi / 2, 1e-15);
}

TEST(Generate, IntervalThree) {
  auto g = generate("interval:n=3");
  ASSERT_TRUE(g.space.has_exact_distances());
  EXPECT_EQ(g.space.d_exact(0, 1), q(1, 2));
  EXPECT_EQ(g.space.d_exact(0, 2), q(1));
  for (Index i = 0; i < 3; ++i) EXPECT_EQ(g.space.nu(i), q(1, 3));
}

TEST(Generate, SphereDistancesAreArccosOfDotProducts) {
  auto g = generate("sphere:n=500");
  ASSERT_EQ(g.coords.size(), 500u);
  for (Index i = 0; i < 500; i += 37)
    for (Index j = 0; j < 500; j += 41) {
      const auto& a = g.coords[i];
      const auto& b = g.coords[j];
      double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      EXPECT_NEAR(std::hypot(a[0], a[1], a[2]), 1.0, 1e-12);
      EXPECT_NEAR(g.space.d(i, j), std::acos(std::clamp(dot, -1.0, 1.0)), 1e-9);
    }
  EXPECT_FALSE(g.atlas.has_value());
}

TEST(Generate, EveryModelValidates) {
  for (const char* spec : {"interval:n=9", "interval:n=4,length=3", "circle:n=16", "sphere:n=200", "grid:nx=3,ny=4",
                           "gaussline:n=41", "graph:edges=0-1:1.5;1-2;2-3:1/2;3-0:2"}) {
    auto g = generate(spec);
    auto r = validate_space(g.space);
    EXPECT_TRUE(r.passed()) << spec;
  }
}

TEST(Generate, GaussianLineMeasureIsExactAndSymmetric) {
  auto g = generate("gaussline:n=21,half_width=2");
  Rational total = 0;
  for (Index i = 0; i < g.space.size(); ++i) total += g.space.nu(i);
  EXPECT_EQ(total, q(1));
  for (Index i = 0; i < 10; ++i) EXPECT_EQ(g.space.nu(i), g.space.nu(20 - i));
  EXPECT_GT(g.space.nu(10), g.space.nu(0));
}

TEST(Generate, GraphShortestPaths) {
  auto g = generate("graph:edges=0-1:1;1-2:1;0-2:5");
  EXPECT_EQ(g.space.d_exact(0, 2), q(2));
  EXPECT_THROW(generate("graph:edges=0-1;2-3"), InputError);
}

TEST(Generate, RejectsUnknownNamesAndParameters) {
  EXPECT_THROW(generate("torus:n=4"), InputError);
  EXPECT_THROW(generate("circle:n=1"), InputError);
  EXPECT_THROW(generate("circle:n=8,bogus=2"), InputError);
  EXPECT_THROW(SpaceSpec::parse(""), InputError);
}

TEST(Generate, SpecRoundTrips) {
  auto s = SpaceSpec::parse("grid:ny=4,nx=3");
  EXPECT_EQ(s.str(), "grid:nx=3,ny=4");
  EXPECT_EQ(SpaceSpec::parse(s.str()).str(), s.str());
}

TEST(Generate, NearestPointMapHalvesCircle) {
  auto fine = generate("circle:n=32"), coarse = generate("circle:n=16");
  auto f = nearest_point_map(fine, coarse);
  for (Index k = 0; k < 32; k += 2) EXPECT_EQ(f[k], k / 2);
}
