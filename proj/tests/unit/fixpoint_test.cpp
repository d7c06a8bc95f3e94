#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "irb/certify.hpp"
#include "irb/fixpoint.hpp"
#include "irb/runner.hpp"
#include "irb/scenario.hpp"

using namespace irb;
using expr::parse;

namespace {

Scenario zero_q() {
  Scenario sc = builtin_scenario("exa1");
  sc.q.formula = parse("0");
  return sc;
}

}  // namespace

TEST_SUITE("fixpoint") {

TEST_CASE("zero q stays at zero") {
  const Scenario sc = zero_q();
  const IrbOperator op(sc.operator_spec());
  for (const auto& f : iterate(op, op.zero(), 3)) CHECK(sup_norm(f) == 0.0);
  const IterationReport rep = solve(op, op.zero(), SolveOptions{});
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(sup_norm(rep.last()) == 0.0);
}

TEST_CASE("exa1 iterates contract") {
  const Scenario sc = builtin_scenario("exa1");
  const IrbOperator op(sc.operator_spec());
  const auto fs = iterate(op, op.zero(), 3);
  const double d21 = distance(fs[2], fs[1], Space::sup());
  const double d32 = distance(fs[3], fs[2], Space::sup());
  CHECK(d32 <= 0.5 * d21 + 1e-3);
}

TEST_CASE("parabola after 8 steps") {
  const Scenario sc = builtin_scenario("parabola");
  const IrbOperator op(sc.operator_spec());
  const auto fs = iterate(op, op.zero(), 8);
  const GridFunction p = GridFunction::sample(op.spec().grid_lo(), 1.0, sc.n_x, oracle::parabola);
  CHECK(distance(fs.back(), p, Space::sup()) <= 1e-3);
}

TEST_CASE("spike residuals decay by three quarters") {
  const Scenario sc = builtin_scenario("lp-spike");
  const IrbOperator op(sc.operator_spec());
  SolveOptions opts;
  opts.tol = 1e-4;
  opts.space = sc.space;
  const IterationReport rep = solve(op, op.zero(), opts);
  CHECK(rep.converged);
  for (std::size_t k = 1; k < rep.residuals.size(); ++k) {
    CHECK(rep.residuals[k] <= (0.75 + 0.02) * rep.residuals[k - 1]);
  }
}

TEST_CASE("parabola a-posteriori bound covers the true error") {
  const Scenario sc = builtin_scenario("parabola");
  const IrbOperator op(sc.operator_spec());
  const GridFunction ref = iterate(op, op.zero(), 30).back();
  SolveOptions opts;
  opts.contraction = 0.25;
  opts.tol = 1e-9;
  const IterationReport rep = solve(op, op.zero(), opts);
  REQUIRE(!rep.bounds.empty());
  CHECK(rep.bounds.back() >= distance(rep.last(), ref, Space::sup()));
}

TEST_CASE("keeps leading iterates and the last one") {
  const Scenario sc = builtin_scenario("exa1");
  const IrbOperator op(sc.operator_spec());
  SolveOptions opts;
  opts.tol = 1e-12;
  const IterationReport rep = solve(op, op.zero(), opts);
  REQUIRE(rep.kept.size() == 5);
  CHECK(rep.kept_index == std::vector<int>{0, 1, 2, 3, rep.iterations});
  CHECK(rep.bounds.empty());
}

TEST_CASE("growth is reported") {
  const Scenario sc = builtin_scenario("exa1");
  OperatorSpec spec = sc.operator_spec();
  spec.s = FunctionFamily::direct(parse("3"), 2);
  const IrbOperator op(std::move(spec));
  SolveOptions opts;
  opts.k_max = 8;
  const IterationReport rep = solve(op, op.zero(), opts);
  CHECK_FALSE(rep.converged);
  REQUIRE(rep.warnings.size() == 1);
  CHECK(rep.warnings[0].rfind("NotContractive", 0) == 0);
}

TEST_CASE("residual contraction under passing bounded certificates") {
  for (const auto& b : builtin_scenarios()) {
    Scenario sc = builtin_scenario(b.name);
    if (sc.space.kind != Space::Kind::sup) continue;
    CAPTURE(b.name);
    const IrbOperator op(sc.operator_spec());
    const Certificate c = certify_bounded(op.spec(), sc.n_t, sc.n_x);
    if (!c.pass) continue;
    SolveOptions opts;
    opts.tol = sc.tol;
    const IterationReport rep = solve(op, sc.initial(), opts);
    for (std::size_t k = 1; k < rep.residuals.size(); ++k) {
      CHECK(rep.residuals[k] <= (c.criterion + 0.02) * rep.residuals[k - 1]);
    }
  }
}

TEST_CASE("start independence") {
  for (const char* name : {"exa1", "exa2", "parabola"}) {
    CAPTURE(name);
    Scenario sc = builtin_scenario(name);
    const IrbOperator op(sc.operator_spec());
    SolveOptions opts;
    const IterationReport from_zero = solve(op, op.zero(), opts);
    const IterationReport from_one = solve(op, op.spec().constant(1.0), opts);
    REQUIRE(from_zero.converged);
    REQUIRE(from_one.converged);
    CHECK(distance(from_zero.last(), from_one.last(), Space::sup()) <= 2 * opts.tol);
  }
}

TEST_CASE("argument checks") {
  const IrbOperator op(builtin_scenario("exa1").operator_spec());
  SolveOptions opts;
  opts.tol = 0.0;
  CHECK_THROWS_AS(solve(op, op.zero(), opts), std::invalid_argument);
  CHECK_THROWS_AS(iterate(op, op.zero(), 0), std::invalid_argument);
  CHECK(a_posteriori_bound(0.5, 2.0) == 2.0);
}

}  // TEST_SUITE
