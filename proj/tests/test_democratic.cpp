#include <gtest/gtest.h>

#include <cmath>

#include "cdkit/batteries.hpp"
#include "cdkit/democratic.hpp"
#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "support.hpp"

using namespace cdkit;
using cdkit::test::q;

namespace {

MetricMeasureSpace two_point() { return test::exact_space({{q(0), q(1)}, {q(1), q(0)}}, {q(1, 2), q(1, 2)}); }

// C = max_x occupation(x) nu[B] / nu(x), straight from the definition.
Rational constant_of(const DynamicalPlan& plan, const MetricMeasureSpace& s, const Ball& B) {
  auto occ = occupation_measure(plan, Quadrature::uniform);
  Rational c = 0;
  for (Index x : s.support()) c = std::max(c, Rational(occ[x] * B.mass / s.nu(x)));
  return c;
}

}  // namespace

TEST(BuildUnique, DeltaIsConstantChain) {
  auto g = generate("interval:n=5,m=4");
  auto pi = build_democratic_unique(ProbMeasure::delta(5, 3), *g.atlas);
  ASSERT_EQ(pi.geodesics().size(), 1u);
  EXPECT_EQ(pi.geodesics()[0].geodesic.chain, std::vector<Index>(5, 3));
  EXPECT_EQ(pi.geodesics()[0].mass, q(1));
}

TEST(BuildUnique, IntervalFiveUniformHas25Chains) {
  auto g = generate("interval:n=5,m=4");
  auto mu = ProbMeasure(test::uniform_weights(5));
  auto pi = build_democratic_unique(mu, *g.atlas);
  ASSERT_EQ(pi.geodesics().size(), 25u);
  for (const auto& wg : pi.geodesics()) EXPECT_EQ(wg.mass, q(1, 25));
  EXPECT_EQ(pi.endpoint_plan(), product_plan(mu, mu));
}

TEST(BuildUnique, TwoPointProduct) {
  GeodesicAtlas atlas(2, AtlasProvenance::analytic);
  auto s = two_point();
  atlas.set(0, 0, {make_geodesic(s, {0, 0, 0})});
  atlas.set(1, 1, {make_geodesic(s, {1, 1, 1})});
  atlas.set(0, 1, {make_geodesic(s, {0, 1, 1})});
  atlas.set(1, 0, {make_geodesic(s, {1, 1, 0})});
  auto pi = build_democratic_unique(ProbMeasure({q(1, 2), q(1, 2)}), atlas);
  ASSERT_EQ(pi.geodesics().size(), 4u);
  for (const auto& wg : pi.geodesics()) EXPECT_EQ(wg.mass, q(1, 4));
}

TEST(BuildUnique, AmbiguousPairIsNamed) {
  auto g = generate("circle:n=4,m=2");
  try {
    build_democratic_unique(ProbMeasure(test::uniform_weights(4)), *g.atlas);
    FAIL() << "expected AtlasError";
  } catch (const AtlasError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,2)"), std::string::npos) << e.what();
  }
}

TEST(DmOptimal, SinglePointBallIsOne) {
  auto g = generate("interval:n=9,m=8");
  auto cert = dm_optimal_constant(g.space, ball(g.space, 4, 0.01), *g.atlas);
  EXPECT_EQ(cert.ball.members, std::vector<Index>{4});
  EXPECT_EQ(cert.c_star, q(1));
}

TEST(DmOptimal, UniqueAtlasMatchesDirectConstant) {
  for (const char* spec : {"interval:n=9,m=8", "interval:n=6,m=4", "grid:n=4,m=4"}) {
    auto g = generate(spec);
    auto B = whole_space_ball(g.space);
    auto cert = dm_optimal_constant(g.space, B, *g.atlas);
    auto pi = build_democratic_unique(cert.mu, *g.atlas);
    EXPECT_EQ(cert.c_star, constant_of(pi, g.space, B)) << spec;
    EXPECT_EQ(cert.ambiguous_mass, 0) << spec;
    EXPECT_EQ(cert.lp_variables, 0u) << spec;
  }
}

TEST(DmOptimal, IntervalNineWithinTwoPlusQuadrature) {
  auto g = generate("interval:n=9,m=8");
  auto cert = dm_optimal_constant(g.space, whole_space_ball(g.space), *g.atlas);
  EXPECT_GE(cert.c_star, 1);
  EXPECT_LE(cert.c_star_value(), 2.0 * (1.0 + 0.25));
}

TEST(DmOptimal, GridWithinFourPlusQuadrature) {
  auto g = generate("grid:n=5,m=8");
  auto cert = dm_optimal_constant(g.space, whole_space_ball(g.space), *g.atlas);
  EXPECT_GE(cert.c_star, 1);
  EXPECT_LE(cert.c_star_value(), 4.0 * (1.0 + 0.25));
}

// Circle(4), m = 2: the antipodal pairs choose between the two midpoints.
// By symmetry the optimum splits them evenly, which makes every midpoint
// load equal, so C* = 1.
TEST(DmOptimal, CircleFourSplitsAntipodes) {
  auto g = generate("circle:n=4,m=2");
  auto B = whole_space_ball(g.space);
  auto cert = dm_optimal_constant(g.space, B, *g.atlas);
  auto split = lift_to_dynamical(product_plan(cert.mu, cert.mu), *g.atlas, LiftSelection::uniform_split);
  EXPECT_EQ(cert.c_star, constant_of(split, g.space, B));
  EXPECT_EQ(cert.c_star, q(1));
  EXPECT_EQ(cert.ambiguous_mass, q(1, 4));
  EXPECT_GT(cert.lp_variables, 0u);
  auto canon = lift_to_dynamical(product_plan(cert.mu, cert.mu), *g.atlas, LiftSelection::canonical);
  EXPECT_GT(constant_of(canon, g.space, B), cert.c_star);
}

TEST(DmOptimal, CertificateInvariants) {
  auto g = generate("circle:n=12,m=6");
  for (const auto& B : ball_family(g.space, radius_ladder(g.space))) {
    auto cert = dm_optimal_constant(g.space, B, *g.atlas);
    EXPECT_EQ(cert.plan.endpoint_plan(), product_plan(cert.mu, cert.mu));
    EXPECT_EQ(interpolate(cert.plan, 0), cert.mu);
    EXPECT_EQ(interpolate(cert.plan, cert.steps), cert.mu);
    EXPECT_GE(cert.c_star, 1);
    bool attained = false;
    for (Index x : g.space.support()) {
      Rational cap = cert.c_star * g.space.nu(x) / B.mass;
      EXPECT_LE(cert.occupation[x], cap);
      attained = attained || cert.occupation[x] == cap;
    }
    EXPECT_TRUE(attained);
    EXPECT_EQ(cert.occupation[cert.argmax] * B.mass / g.space.nu(cert.argmax), cert.c_star);
    // Uniform time averages are unchanged by running the plan backwards.
    EXPECT_EQ(occupation_measure(cert.plan.reversed(), Quadrature::uniform), cert.occupation);
  }
}

TEST(DmOptimal, FloatModeAgrees) {
  auto g = generate("circle:n=12,m=6");
  DmOptions fl;
  fl.mode = Arithmetic::floating;
  auto B = ball(g.space, 0, 1.6);
  EXPECT_NEAR(dm_optimal_constant(g.space, B, *g.atlas, fl).c_star_value(),
              dm_optimal_constant(g.space, B, *g.atlas).c_star_value(), 1e-7);
}

TEST(DmOptimal, EnlargingTheAtlasNeverHurts) {
  auto g = generate("circle:n=6");
  EnumerationOptions o;
  o.steps = 3;
  auto full = enumerate_atlas(g.space, o);
  GeodesicAtlas thin(3, AtlasProvenance::enumerated);
  for (const auto& [key, list] : full.entries()) {
    // Keep one chain per pair, oriented consistently so the thin atlas stays
    // reversal-closed.
    auto [a, b] = key;
    thin.set(a, b, {a <= b ? list.front() : full.at(b, a).front().reversed()});
  }
  for (const auto& B : {whole_space_ball(g.space), ball(g.space, 0, 2.2), ball(g.space, 3, 1.1)})
    EXPECT_LE(dm_optimal_constant(g.space, B, full).c_star, dm_optimal_constant(g.space, B, thin).c_star);
}

TEST(DmOptimal, Errors) {
  auto s = test::space({{0, 1}, {1, 0}}, {q(1), q(0)});
  GeodesicAtlas atlas(2, AtlasProvenance::enumerated);
  EXPECT_THROW(dm_optimal_constant(s, ball(s, 1, 0.5), atlas), InputError);
  auto g = generate("interval:n=3");
  GeodesicAtlas partial(2, AtlasProvenance::enumerated);
  partial.set(0, 0, {make_geodesic(g.space, {0, 0, 0})});
  EXPECT_THROW(dm_optimal_constant(g.space, whole_space_ball(g.space), partial), AtlasError);
}

// Two points at the default tolerance admit every 0/1 chain, so the LP can
// spread the transit mass to match nu exactly. Fixing the reversal-closed
// pair of chains 0,1,1 / 1,1,0 instead piles mass on point 1.
TEST(VerifyDm, TwoPointSpace) {
  auto s = two_point();
  EnumerationOptions o;
  o.steps = 2;
  auto full = enumerate_atlas(s, o);
  auto B = whole_space_ball(s);
  auto loose = verify_dm(s, q(1), {B}, full);
  EXPECT_TRUE(loose.passed);
  EXPECT_DOUBLE_EQ(loose.balls[0].c_star, 1.0);

  GeodesicAtlas pinned(2, AtlasProvenance::enumerated);
  pinned.set(0, 0, {make_geodesic(s, {0, 0, 0})});
  pinned.set(1, 1, {make_geodesic(s, {1, 1, 1})});
  pinned.set(0, 1, {make_geodesic(s, {0, 1, 1})});
  pinned.set(1, 0, {make_geodesic(s, {1, 1, 0})});
  auto tight = verify_dm(s, q(1), {B}, pinned);
  EXPECT_FALSE(tight.passed);
  EXPECT_EQ(dm_optimal_constant(s, B, pinned).c_star, q(7, 6));
}

TEST(VerifyDm, SelfConsistentAndSweep) {
  auto g = generate("interval:n=9,m=8");
  auto B = ball(g.space, 2, 0.4);
  auto c = dm_optimal_constant(g.space, B, *g.atlas).c_star;
  EXPECT_TRUE(verify_dm(g.space, c, {B}, *g.atlas).passed);
  EXPECT_FALSE(verify_dm(g.space, c - q(1, 1000000), {B}, *g.atlas).passed);

  auto balls = ball_family(g.space, radius_ladder(g.space));
  auto report = verify_dm(g.space, q(5, 2), balls, *g.atlas);
  EXPECT_TRUE(report.passed);
  ASSERT_EQ(report.balls.size(), balls.size());
  for (const auto& r : report.balls) EXPECT_LE(r.c_star, report.balls[report.worst].c_star);
}

TEST(DensityBound, ThresholdsAndIntervalPass) {
  auto g = generate("interval:n=9,m=8");
  auto B = whole_space_ball(g.space);
  auto cert = dm_optimal_constant(g.space, B, *g.atlas);
  // Lattice rounding overshoots the continuum threshold by 5/72 at t = 1/8.
  auto strict = density_bound_check(cert.plan, g.space, 1.0, B.mass);
  EXPECT_FALSE(strict.passed);
  EXPECT_NEAR(strict.rows[1].max_density / strict.rows[1].threshold, 77.0 / 72.0, 1e-12);
  auto r = density_bound_check(cert.plan, g.space, 1.0, B.mass, 0.1);
  ASSERT_EQ(r.rows.size(), 9u);
  EXPECT_DOUBLE_EQ(r.rows[4].threshold, 2.0);
  EXPECT_DOUBLE_EQ(r.rows[0].threshold, 1.0);
  EXPECT_DOUBLE_EQ(r.rows[0].max_density, 1.0);
  EXPECT_DOUBLE_EQ(r.rows[8].max_density, 1.0);
  EXPECT_TRUE(r.passed);
  auto r2 = density_bound_check(cert.plan, g.space, 2.0, B.mass);
  EXPECT_DOUBLE_EQ(r2.rows[4].threshold, 4.0);
}

TEST(DensityBound, SmallBallThresholdScales) {
  auto g = generate("interval:n=9,m=8");
  auto B = ball(g.space, 0, 0.3);  // {0, 1, 2}
  auto cert = dm_optimal_constant(g.space, B, *g.atlas);
  auto r = density_bound_check(cert.plan, g.space, 1.0, B.mass);
  EXPECT_DOUBLE_EQ(r.rows[4].threshold, 2.0 * 3.0);
  EXPECT_DOUBLE_EQ(r.rows[0].max_density, 3.0);
}

TEST(DensityBound, NullPointMassFails) {
  auto s = test::space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {q(1, 2), q(0), q(1, 2)});
  auto geo = make_geodesic(s, {0, 1, 2});
  DynamicalPlan plan(3, 2, {{geo, q(1)}});
  auto r = density_bound_check(plan, s, 10.0, q(1));
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(std::isinf(r.rows[1].max_density));
}

TEST(LpDensity, IntervalConsistency) {
  auto g = generate("interval:n=9,m=8");
  auto B = whole_space_ball(g.space);
  auto cert = dm_optimal_constant(g.space, B, *g.atlas);
  std::vector<Rational> one(9, q(1));
  auto r = lp_density_bound_check(cert.plan, g.space, one, 2.0, 1.0);
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.rows[0].norm, r.base_norm);
  EXPECT_DOUBLE_EQ(r.base_norm, 1.0);
  // Large p approaches the sup-norm form: bound -> 2^N at the midpoint.
  auto big = lp_density_bound_check(cert.plan, g.space, one, 100.0, 1.0);
  auto sup = density_bound_check(cert.plan, g.space, 1.0, B.mass);
  EXPECT_NEAR(big.rows[4].bound, sup.rows[4].threshold, 0.02);
  EXPECT_NEAR(big.rows[4].norm, sup.rows[4].max_density, 0.1);
  EXPECT_THROW(lp_density_bound_check(cert.plan, g.space, one, 1.0, 1.0), InputError);
  EXPECT_THROW(lp_density_bound_check(cert.plan, g.space, one, INFINITY, 1.0), InputError);
}
