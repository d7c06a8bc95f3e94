#include <doctest.h>

#include <cmath>

#include "irb/grid.hpp"
#include "irb/parallel.hpp"

using namespace irb;

TEST_SUITE("grid") {

TEST_CASE("nodes and interpolation") {
  const GridFunction f = GridFunction::sample(0.0, 1.0, 5, [](double x) { return x * x; });
  CHECK(f.x(0) == 0.0);
  CHECK(f.x(4) == 1.0);
  CHECK(f.x(2) == 0.5);
  CHECK(f.at(0.5) == 0.25);
  CHECK(f.at(0.375) == doctest::Approx(0.5 * (0.0625 + 0.25)));
  CHECK(f.at(1.0) == 1.0);
  CHECK_THROWS_AS(f.at(1.5), std::out_of_range);
  CHECK(f.at_clamped(1.5) == 1.0);
  CHECK(f.at_clamped(-1.0) == 0.0);
  CHECK_THROWS(GridFunction(0.0, 1.0, {1.0}));
  CHECK_THROWS(GridFunction(1.0, 1.0, {1.0, 2.0}));
}

TEST_CASE("norms") {
  const GridFunction one = GridFunction::constant(0.0, 1.0, 11, 1.0);
  CHECK(norm(one, Space::sup()) == 1.0);
  CHECK(norm(one, Space::lp(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const GridFunction x = GridFunction::sample(0.0, 1.0, 101, [](double v) { return v; });
  CHECK(std::fabs(p_norm(x, 1.0) - 0.5) <= 1e-12);
  CHECK(sup_norm(GridFunction(0.0, 1.0, {-3.0, 2.0})) == 3.0);
  CHECK(distance(GridFunction::constant(0.0, 1.0, 101, 1.0), x, Space::sup()) == 1.0);
  CHECK_THROWS_AS(distance(one, x, Space::sup()), std::invalid_argument);
  CHECK_THROWS(Space::lp(0.5));
}

TEST_CASE("space parsing") {
  CHECK(Space::parse("sup") == Space::sup());
  CHECK(Space::parse("lp(1)") == Space::lp(1.0));
  CHECK(Space::parse(Space::lp(2.5).to_string()) == Space::lp(2.5));
  CHECK_THROWS(Space::parse("l2"));
}

TEST_CASE("combine") {
  const GridFunction a = GridFunction::constant(0.0, 1.0, 3, 1.0);
  const GridFunction b = GridFunction::constant(0.0, 1.0, 3, 2.0);
  CHECK(GridFunction::combine(0.25, a, 0.75, b)[1] == 1.75);
  CHECK_THROWS(GridFunction::combine(1.0, a, 1.0, GridFunction::constant(0.0, 2.0, 3, 0.0)));
}

TEST_CASE("parallel_for covers every index once and propagates errors") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(worker_count() >= 1);
}

}  // TEST_SUITE
