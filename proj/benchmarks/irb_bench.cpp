#include <benchmark/benchmark.h>

#include "irb/certify.hpp"
#include "irb/expr.hpp"
#include "irb/fixpoint.hpp"
#include "irb/operator.hpp"
#include "irb/scenario.hpp"

namespace {

using namespace irb;

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::parse("clamp(x, 0, 1) * max(t, 1) - exp(-x) + ge(x, 2 - t) * (1/2)*x*(t-1)"));
  }
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
  const expr::Expr e = expr::parse("(1/2)*x*(t-1) + ge(x, 2-t)");
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::eval(e, 1.5, x));
    x += 1e-6;
  }
}
BENCHMARK(BM_Eval);

// Construction tabulates pullbacks for every (x_i, t_j) pair.
void BM_OperatorBuild(benchmark::State& state) {
  Scenario sc = builtin_scenario("exa1");
  sc.n_x = static_cast<int>(state.range(0));
  sc.n_t = static_cast<int>(state.range(1));
  const OperatorSpec spec = sc.operator_spec();
  for (auto _ : state) benchmark::DoNotOptimize(IrbOperator(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_OperatorBuild)->Args({257, 128})->Args({1025, 512})->Unit(benchmark::kMillisecond);

void BM_OperatorApply(benchmark::State& state) {
  Scenario sc = builtin_scenario("parabola");
  sc.n_x = static_cast<int>(state.range(0));
  sc.n_t = static_cast<int>(state.range(1));
  const IrbOperator op(sc.operator_spec());
  GridFunction f = op.zero();
  for (auto _ : state) {
    f = op.apply(f);
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_OperatorApply)->Args({257, 128})->Args({1025, 512})->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const Scenario sc = builtin_scenario("parabola");
  const IrbOperator op(sc.operator_spec());
  SolveOptions opts;
  opts.tol = sc.tol;
  opts.k_max = sc.k_max;
  opts.space = sc.space;
  opts.contraction = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(solve(op, op.zero(), opts));
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

void BM_CertifyBounded(benchmark::State& state) {
  const Scenario sc = builtin_scenario("exa1");
  const OperatorSpec spec = sc.operator_spec();
  for (auto _ : state) benchmark::DoNotOptimize(certify_bounded(spec, sc.n_t, sc.n_x));
}
BENCHMARK(BM_CertifyBounded)->Unit(benchmark::kMillisecond);

void BM_CertifyLp(benchmark::State& state) {
  const Scenario sc = builtin_scenario("lp-spike");
  const OperatorSpec spec = sc.operator_spec();
  for (auto _ : state) benchmark::DoNotOptimize(certify_lp(spec, sc.space.p, sc.n_t, sc.n_x));
}
BENCHMARK(BM_CertifyLp)->Unit(benchmark::kMillisecond);

void BM_ConfigRoundTrip(benchmark::State& state) {
  const std::string text = write_config(builtin_scenario("takagi"));
  for (auto _ : state) benchmark::DoNotOptimize(parse_config(text));
}
BENCHMARK(BM_ConfigRoundTrip);

}  // namespace
BENCHMARK_MAIN();
