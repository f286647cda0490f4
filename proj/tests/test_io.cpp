#include <gtest/gtest.h>

#include "cdkit/democratic.hpp"
#include "cdkit/error.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/io.hpp"
#include "support.hpp"

using namespace cdkit;
using cdkit::test::q;

namespace {

std::string data(const std::string& name) { return std::string(CDKIT_TEST_DATA) + "/" + name; }

}  // namespace

TEST(SpaceJson, LoadsExactFileWithAtlas) {
  auto g = load_space_file(data("path4.json"));
  EXPECT_EQ(g.space.size(), 4u);
  EXPECT_TRUE(g.space.has_exact_measure());
  EXPECT_TRUE(g.space.has_exact_distances());
  EXPECT_EQ(g.space.nu(1), q(3, 8));
  EXPECT_EQ(g.space.d_exact(0, 3), q(3));
  ASSERT_TRUE(g.atlas);
  EXPECT_EQ(g.atlas->steps(), 1);
  EXPECT_EQ(g.atlas->pair_count(), 16u);
  EXPECT_TRUE(validate_space(g.space).passed());
  EXPECT_EQ(generate("file:" + data("path4.json")).space.ids(), g.space.ids());
}

TEST(SpaceJson, BadTriangleLoadsButFailsValidation) {
  auto g = load_space_file(data("bad_triangle.json"));
  EXPECT_EQ(g.space.id(2), "c");
  auto r = validate_space(g.space);
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.violations.front().kind, ViolationKind::triangle);
  auto j = report_json(r);
  EXPECT_EQ(j["schema"], kSchemaVersion);
  EXPECT_FALSE(j["passed"].get<bool>());
}

TEST(SpaceJson, RoundTripPreservesExactData) {
  for (const char* spec : {"interval:n=5,m=4", "graph:edges=0-1:1/3;1-2:2", "gaussline:n=9"}) {
    auto g = generate(spec);
    auto j = space_to_json(g.space, g.atlas ? &*g.atlas : nullptr);
    auto back = space_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.space.measure(), g.space.measure()) << spec;
    EXPECT_EQ(back.space.distances(), g.space.distances()) << spec;
    EXPECT_EQ(back.space.has_exact_distances(), g.space.has_exact_distances()) << spec;
    if (g.atlas) {
      ASSERT_TRUE(back.atlas);
      EXPECT_EQ(back.atlas->entries(), g.atlas->entries());
    }
  }
}

TEST(SpaceJson, FloatMeasureStaysFloat) {
  auto j = Json::parse(R"({"points": 2, "dist": [[0, 0.5], [0.5, 0]], "nu": [0.25, 0.75]})");
  auto g = space_from_json(j);
  EXPECT_FALSE(g.space.has_exact_measure());
  EXPECT_FALSE(g.space.has_exact_distances());
  EXPECT_DOUBLE_EQ(g.space.nu_value(1), 0.75);
}

TEST(SpaceJson, Errors) {
  EXPECT_THROW(load_space_file(data("missing.json")), InputError);
  EXPECT_THROW(space_from_json(Json::parse(R"({"points": 2, "dist": [[0, 1]], "nu": [1, 0]})")), InputError);
  EXPECT_THROW(space_from_json(Json::parse(R"({"points": 2, "dist": [[0, 1], [1, 0]], "nu": ["1/2", "x"]})")),
               InputError);
  EXPECT_THROW(space_from_json(Json::parse(R"({"points": 2, "dist": [[0, 1], [1, 0]]})")), InputError);
  // Atlas chains must join the pair they are filed under.
  EXPECT_THROW(space_from_json(Json::parse(
                   R"({"points": 2, "dist": [[0, 1], [1, 0]], "nu": ["1/2", "1/2"],
                       "atlas": {"m": 1, "pairs": {"0,1": [[1, 0]]}}})")),
               Error);
}

TEST(Measures, DensityFileDescriptor) {
  auto g = load_space_file(data("path4.json"));
  auto mu = parse_measure(g.space, "density:" + data("density.json"));
  EXPECT_EQ(mu, ProbMeasure({q(1, 4), q(3, 8), q(3, 8), q(0)}));
}

TEST(Reports, CarryParametersAndAreDeterministic) {
  auto g = generate("circle:n=12,m=6");
  auto B = ball(g.space, 0, 1.6);
  auto a = report_json(dm_optimal_constant(g.space, B, *g.atlas), g.space);
  auto b = report_json(dm_optimal_constant(g.space, B, *g.atlas), g.space);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["schema"], kSchemaVersion);
  EXPECT_EQ(a["m"], 6);
  EXPECT_EQ(a["quadrature"], "uniform");
  EXPECT_EQ(a["mode"], "exact");
  EXPECT_TRUE(a["c_star"].contains("exact"));
}

TEST(Reports, RationalAndNonFinite) {
  auto r = rational_json(q(-3, 7));
  EXPECT_EQ(r["exact"], "-3/7");
  EXPECT_DOUBLE_EQ(r["value"].get<double>(), -3.0 / 7);
  DiameterReport d;
  d.diameter = 1.0;
  d.bound = kInfinity;
  d.margin = kInfinity;
  d.passed = true;
  auto j = report_json(d);
  EXPECT_EQ(j["bound"], "inf");
}
