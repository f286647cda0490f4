#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cdkit/democratic.hpp"
#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/gh.hpp"
#include "support.hpp"

using namespace cdkit;
using cdkit::test::q;

namespace {

PointMap identity(std::size_t n) {
  PointMap f(n);
  for (Index i = 0; i < n; ++i) f[i] = i;
  return f;
}

PointMap halving(std::size_t n) {
  PointMap f(n);
  for (Index i = 0; i < n; ++i) f[i] = i / 2;
  return f;
}

}  // namespace

TEST(Approximation, IdentityIsExact) {
  auto g = generate("circle:n=16");
  auto r = validate_approximation(identity(16), g.space, g.space);
  EXPECT_EQ(r.epsilon_min, 0.0);
}

TEST(Approximation, HalvingCircleWithinOneMesh) {
  auto Y = generate("circle:n=32"), X = generate("circle:n=16");
  auto r = validate_approximation(halving(32), Y.space, X.space);
  EXPECT_NEAR(r.epsilon_min, std::numbers::pi / 16, 1e-12);  // neighbours collapse
  EXPECT_LE(r.epsilon_min, X.space.mesh());
  EXPECT_EQ(r.surjectivity, 0.0);
  EXPECT_NEAR(std::abs(X.space.d(halving(32)[r.distortion_y0], halving(32)[r.distortion_y1]) -
                       Y.space.d(r.distortion_y0, r.distortion_y1)),
              r.distortion, 1e-15);
  // Odd points are equidistant from two targets; ties go to the lower index.
  auto near = nearest_point_map(Y, X);
  for (Index i = 0; i < 31; ++i) EXPECT_EQ(near[i], i / 2) << i;
  EXPECT_EQ(near[31], 0u);
}

TEST(Approximation, ConstantMapMissesHalfTheTarget) {
  auto s = test::exact_space({{q(0), q(1)}, {q(1), q(0)}}, {q(1, 2), q(1, 2)});
  auto r = validate_approximation({0, 0}, s, s);
  EXPECT_GE(r.epsilon_min, 1.0);
  EXPECT_EQ(r.surjectivity_x, 1u);
  EXPECT_THROW(validate_approximation({0}, s, s), InputError);
  EXPECT_THROW(validate_approximation({0, 2}, s, s), InputError);
}

TEST(Pushforward, Examples) {
  auto mu = ProbMeasure({q(1, 4), q(1, 4), q(1, 8), q(3, 8)});
  EXPECT_EQ(pushforward(identity(4), mu, 4), mu);
  EXPECT_EQ(pushforward(halving(4), ProbMeasure(test::uniform_weights(4)), 2), ProbMeasure({q(1, 2), q(1, 2)}));
  EXPECT_EQ(pushforward(halving(4), ProbMeasure::delta(4, 3), 2), ProbMeasure::delta(2, 1));
  EXPECT_EQ(pushforward(halving(4), mu, 2), ProbMeasure({q(1, 2), q(1, 2)}));
}

TEST(Pushforward, CommutesWithMixtures) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> w(0, 5);
  auto random = [&] {
    std::vector<Rational> v(6);
    Rational t = 0;
    while (t == 0) {
      t = 0;
      for (auto& x : v) t += (x = w(rng));
    }
    for (auto& x : v) x /= t;
    return v;
  };
  PointMap f{0, 0, 1, 2, 2, 2};
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random(), b = random();
    Rational s = q(1, 3);
    std::vector<Rational> mix(6);
    for (Index i = 0; i < 6; ++i) mix[i] = s * a[i] + (1 - s) * b[i];
    auto fa = pushforward(f, ProbMeasure(a), 3), fb = pushforward(f, ProbMeasure(b), 3);
    std::vector<Rational> want(3);
    for (Index i = 0; i < 3; ++i) want[i] = s * fa[i] + (1 - s) * fb[i];
    EXPECT_EQ(pushforward(f, ProbMeasure(mix), 3), ProbMeasure(want));
  }
}

TEST(Lift, IdentityReturnsTheSameGeodesic) {
  auto g = generate("circle:n=16,m=8");
  for (const auto& [key, list] : g.atlas->entries())
    for (const auto& geo : list) {
      auto l = lift_geodesic(identity(16), geo, g.space, *g.atlas);
      EXPECT_EQ(l.lifted, geo);
      EXPECT_EQ(l.distance, 0.0);
    }
}

TEST(Lift, HalvingStaysWithinEpsilonPlusMesh) {
  auto Y = generate("circle:n=32,m=8"), X = generate("circle:n=16,m=8");
  auto f = halving(32);
  double eps = validate_approximation(f, Y.space, X.space).epsilon_min;
  for (const auto& [key, list] : Y.atlas->entries())
    for (const auto& geo : list) {
      auto l = lift_geodesic(f, geo, X.space, *X.atlas);
      EXPECT_LE(l.distance, eps + X.space.mesh() + 1e-12) << key.first << "," << key.second;
      EXPECT_EQ(l.source, geo);
    }
}

TEST(Lift, AntipodalArcsStayDistinct) {
  auto Y = generate("circle:n=32,m=8"), X = generate("circle:n=16,m=8");
  const auto& arcs = Y.atlas->at(0, 16);
  ASSERT_EQ(arcs.size(), 2u);
  auto a = lift_geodesic(halving(32), arcs[0], X.space, *X.atlas);
  auto b = lift_geodesic(halving(32), arcs[1], X.space, *X.atlas);
  EXPECT_NE(a.lifted, b.lifted);
  EXPECT_EQ(a.lifted.start(), 0u);
  EXPECT_EQ(a.lifted.end(), 8u);
}

TEST(Lift, Errors) {
  auto g = generate("circle:n=16,m=8");
  auto other = generate("circle:n=16,m=4");
  const auto& geo = g.atlas->at(0, 3).front();
  EXPECT_THROW(lift_geodesic(identity(16), geo, g.space, *other.atlas), InputError);
  GeodesicAtlas empty(8, AtlasProvenance::enumerated);
  EXPECT_THROW(lift_geodesic(identity(16), geo, g.space, empty), AtlasError);
}

TEST(TransportPlan, IdentityHasZeroDistances) {
  auto g = generate("circle:n=16,m=8");
  auto cert = dm_optimal_constant(g.space, ball(g.space, 0, 1.3), *g.atlas);
  auto r = transport_plan(identity(16), cert.plan, g.space, *g.atlas);
  EXPECT_EQ(r.max_lift_distance, 0.0);
  EXPECT_EQ(r.endpoint_w1, 0.0);
  EXPECT_NEAR(r.max_time_w1(), 0.0, 1e-12);
  ASSERT_EQ(r.time_w1.size(), 9u);
}

TEST(TransportPlan, HalvingBoundedByTwoEpsilonPlusMesh) {
  auto Y = generate("circle:n=32,m=8"), X = generate("circle:n=16,m=8");
  auto f = halving(32);
  double eps = validate_approximation(f, Y.space, X.space).epsilon_min;
  auto cert = dm_optimal_constant(Y.space, ball(Y.space, 0, 1.2), *Y.atlas);
  auto r = transport_plan(f, cert.plan, X.space, *X.atlas);
  const double bound = 2 * eps + X.space.mesh() + 1e-12;
  EXPECT_LE(r.max_lift_distance, bound);
  EXPECT_LE(r.endpoint_w1, bound);
  EXPECT_LE(r.max_time_w1(), bound);
  EXPECT_EQ(r.lifted.total_mass(), q(1));
}

TEST(TransportPlan, SingleGeodesicMatchesItsLift) {
  auto Y = generate("circle:n=32,m=8"), X = generate("circle:n=16,m=8");
  auto f = halving(32);
  const auto& geo = Y.atlas->at(3, 11).front();
  DynamicalPlan plan(32, 8, {{geo, q(1)}});
  auto r = transport_plan(f, plan, X.space, *X.atlas);
  auto l = lift_geodesic(f, geo, X.space, *X.atlas);
  EXPECT_DOUBLE_EQ(r.max_lift_distance, l.distance);
  EXPECT_NEAR(r.max_time_w1(), l.distance, 1e-12);
  EXPECT_NEAR(r.endpoint_w1, X.space.d(f[3], l.lifted.start()) + X.space.d(f[11], l.lifted.end()), 1e-12);
}

TEST(BallDescriptor, Parse) {
  EXPECT_TRUE(BallDescriptor::parse("all").whole);
  auto b = BallDescriptor::parse("3,0.75");
  EXPECT_FALSE(b.whole);
  EXPECT_EQ(b.center, 3u);
  EXPECT_DOUBLE_EQ(b.radius, 0.75);
  EXPECT_THROW(BallDescriptor::parse("3"), InputError);
  EXPECT_THROW(BallDescriptor::parse("x,1"), InputError);
  EXPECT_THROW(BallDescriptor::parse("1,-2"), InputError);
}

TEST(Stability, IntervalRefinement) {
  std::vector<SpaceSpec> levels{SpaceSpec::parse("interval:n=5"), SpaceSpec::parse("interval:n=9")};
  auto r = dm_stability_experiment(levels, SpaceSpec::parse("interval:n=17"), BallDescriptor::parse("all"));
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_TRUE(r.bounded);
  for (const auto& l : r.levels) {
    EXPECT_GE(l.c_star, 1.0);
    EXPECT_LE(l.c_star, 2.25);
  }
  EXPECT_EQ(r.levels[0].points, 5u);
  EXPECT_GT(r.levels[0].epsilon, r.levels[1].epsilon);
  auto csv = r.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "level,points,epsilon,center,c_star,ambiguous_mass,closed_ball_differs,max_lift_distance,endpoint_w1,"
            "max_time_w1");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Stability, CircleHalfBall) {
  std::vector<SpaceSpec> levels{SpaceSpec::parse("circle:n=8"), SpaceSpec::parse("circle:n=16"),
                                SpaceSpec::parse("circle:n=32")};
  BallDescriptor half = BallDescriptor::parse("0," + std::to_string(63 * std::numbers::pi / 128));
  StabilityOptions o;
  o.required_decrease = 0.3;
  auto r = dm_stability_experiment(levels, SpaceSpec::parse("circle:n=64"), half, o);
  EXPECT_TRUE(r.bounded);
  EXPECT_TRUE(r.decreasing);
  EXPECT_GE(r.w1_decrease, 0.3);
}

TEST(Stability, TargetNeedsAnAtlas) {
  std::vector<SpaceSpec> levels{SpaceSpec::parse("sphere:n=20")};
  EXPECT_ANY_THROW(dm_stability_experiment(levels, SpaceSpec::parse("sphere:n=40"), BallDescriptor::parse("all")));
}
