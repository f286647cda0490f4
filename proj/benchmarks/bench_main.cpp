#include <benchmark/benchmark.h>

#include <random>

#include "cdkit/democratic.hpp"
#include "cdkit/generators.hpp"
#include "cdkit/geodesics.hpp"
#include "cdkit/lp.hpp"
#include "cdkit/transport.hpp"

using namespace cdkit;

namespace {

// Dense random transportation LP with n sources and n sinks.
LinearProgram transportation_lp(std::size_t n) {
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<int> c(1, 20);
  LinearProgram lp;
  for (std::size_t k = 0; k < n * n; ++k) lp.add_variable(Rational(c(rng)));
  for (std::size_t i = 0; i < n; ++i) {
    LinearConstraint row, col;
    for (std::size_t j = 0; j < n; ++j) {
      row.terms.emplace_back(i * n + j, Rational(1));
      col.terms.emplace_back(j * n + i, Rational(1));
    }
    row.rhs = col.rhs = Rational(1, static_cast<unsigned long>(n));
    lp.add_constraint(std::move(row));
    lp.add_constraint(std::move(col));
  }
  return lp;
}

void BM_SolveLp(benchmark::State& state, Arithmetic mode, PivotRule rule) {
  auto lp = transportation_lp(static_cast<std::size_t>(state.range(0)));
  LpOptions opt;
  opt.mode = mode;
  opt.rule = rule;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp, opt));
}
BENCHMARK_CAPTURE(BM_SolveLp, exact_bland, Arithmetic::exact, PivotRule::bland)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK_CAPTURE(BM_SolveLp, float_bland, Arithmetic::floating, PivotRule::bland)->Arg(4)->Arg(8)->Arg(12)->Arg(20);
BENCHMARK_CAPTURE(BM_SolveLp, float_dantzig, Arithmetic::floating, PivotRule::dantzig)->Arg(4)->Arg(8)->Arg(12)->Arg(20);

void BM_W2Circle(benchmark::State& state, Arithmetic mode) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto g = generate("circle:n=" + std::to_string(n));
  auto mu0 = parse_measure(g.space, "ball:0,1.0");
  auto mu1 = parse_measure(g.space, "uniform");
  TransportOptions opt;
  opt.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(solve_w2(g.space, mu0, mu1, opt));
}
BENCHMARK_CAPTURE(BM_W2Circle, exact, Arithmetic::exact)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK_CAPTURE(BM_W2Circle, floating, Arithmetic::floating)->Arg(8)->Arg(16)->Arg(24)->Arg(32);

void BM_DmWholeSpace(benchmark::State& state, const char* spec) {
  auto g = generate(spec);
  auto B = whole_space_ball(g.space);
  for (auto _ : state) benchmark::DoNotOptimize(dm_optimal_constant(g.space, B, *g.atlas));
}
BENCHMARK_CAPTURE(BM_DmWholeSpace, interval17, "interval:n=17,m=8");
BENCHMARK_CAPTURE(BM_DmWholeSpace, grid5, "grid:nx=5,ny=5,m=8");
BENCHMARK_CAPTURE(BM_DmWholeSpace, circle16, "circle:n=16,m=8");
BENCHMARK_CAPTURE(BM_DmWholeSpace, circle32, "circle:n=32,m=8");

void BM_EnumerateAtlas(benchmark::State& state) {
  auto g = generate("circle:n=" + std::to_string(state.range(0)));
  EnumerationOptions opt;
  opt.steps = 4;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_atlas(g.space, opt));
}
BENCHMARK(BM_EnumerateAtlas)->Arg(8)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
