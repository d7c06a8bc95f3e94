#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/oracles.hpp"
#include "irb/export.hpp"
#include "irb/runner.hpp"
#include "irb/scenario.hpp"

#include <json.hpp>

using namespace irb;
using expr::parse;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("irb_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"([domain]
a = 0
b = 1
[maps]
base = x/2; x/2 + 1/2
[q]
formula = 0
[s]
formula = 1/2
)";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("exa1 text parses to the discontinuous example") {
  const Scenario sc = builtin_scenario("exa1");
  CHECK(sc.name == "exa1");
  CHECK(sc.a == 0.0);
  CHECK(sc.b == 1.0);
  CHECK(sc.n == 2);
  CHECK(sc.n_t == 512);
  CHECK(sc.n_x == 1025);
  CHECK(sc.delta == 0.0);
  CHECK(sc.homotopy == Homotopy::identity());
  CHECK(sc.maps.base == std::vector<expr::Expr>{parse("x/2"), parse("x/2 + 1/2")});
  CHECK(*sc.q.formula == parse("ge(x, 2-t)"));
  CHECK(*sc.s.formula == parse("(1/2)*x*(t-1)"));
  CHECK(sc.space == Space::sup());
  CHECK(sc.tol == 1e-6);
  CHECK(sc.k_max == 50);
  CHECK(sc.f0.kind == InitialGuess::Kind::zero);
}

TEST_CASE("parabola and takagi parameters") {
  const Scenario par = builtin_scenario("parabola");
  CHECK(par.s.double_ends);
  CHECK(par.s.base == std::vector<expr::Expr>{parse("1/4"), parse("1/4")});
  const OperatorSpec spec = par.operator_spec();
  CHECK(spec.s(1.2, 0.3) == 0.5);
  CHECK(spec.q(1.2, 0.3) == doctest::Approx(0.3));
  const Scenario tak = builtin_scenario("takagi");
  CHECK(tak.operator_spec().s(1.7, 0.3) == 1.0);
  CHECK(tak.maps == par.maps);
  CHECK(tak.q == par.q);
}

TEST_CASE("defaults and overrides") {
  const Scenario sc = parse_config(kMinimal);
  CHECK(sc.n == 2);
  CHECK(sc.n_t == 512);
  CHECK(sc.n_x == 1025);
  CHECK(sc.tol == 1e-6);
  RunOptions o;
  o.n_t = 64;
  o.n_x = 33;
  o.tol = 1e-3;
  const Scenario s2 = with_overrides(sc, o);
  CHECK(s2.n_t == 64);
  CHECK(s2.n_x == 33);
  CHECK(s2.tol == 1e-3);
  o.n_t = 63;
  CHECK_THROWS_AS(with_overrides(sc, o), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[domain]\na = 0\nb = 1\n[q]\nformula = 0\n[s]\nformula = 0\n"), ConfigError);
  try {
    parse_config("[domain]\na = 0\nb = 1\n[q]\nformula = 0\n[s]\nformula = 0\n");
  } catch (const ConfigError& e) {
    CHECK(e.section() == "maps");
  }
  try {
    parse_config(std::string(kMinimal) + "[run]\nf0 = x +\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.section() == "run");
    CHECK(e.key() == "f0");
    CHECK(e.line() == 11);
  }
  try {
    parse_config(std::string(kMinimal) + "[time]\nnt = 101\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "nt");
    CHECK(e.line() == 11);
  }
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[domain]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nspeed = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[extra]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[domain]\na = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[time]\nn = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\ntol = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[run]\nkmax = many\n"), ConfigError);
}

TEST_CASE("builtins round-trip through the writer") {
  CHECK(builtin_scenarios().size() == 7);
  for (const auto& b : builtin_scenarios()) {
    CAPTURE(b.name);
    const Scenario sc = parse_config(b.text);
    const std::string text = write_config(sc);
    CHECK(parse_config(text) == sc);
    CHECK(write_config(parse_config(text)) == text);
  }
  CHECK_THROWS_AS(builtin_scenario("missing"), ScenarioNotFound);
}

TEST_CASE("base triple at integer times") {
  const BaseTriple t = builtin_scenario("exa1").base_triple();
  CHECK(expr::eval(t.q[0], 0, 0.99) == 0.0);
  CHECK(expr::eval(t.q[0], 0, 1.0) == 1.0);
  CHECK(expr::eval(t.q[1], 0, 0.0) == 1.0);
  CHECK(expr::eval(t.s[1], 0, 1.0) == 0.5);
}

TEST_CASE("csv layout and round-trip") {
  const GridFunction a(0.0, 1.0, {0.1, 1.0 / 3.0, 2.0 / 3.0});
  const GridFunction b(0.0, 1.0, {std::nextafter(1.0, 2.0), -1e-300, 12345.678901234567});
  std::ostringstream os;
  write_csv(os, {a, b});
  std::istringstream is(os.str());
  const CsvTable t = read_csv(is);
  CHECK(t.header == std::vector<std::string>{"x", "f0", "f1"});
  REQUIRE(t.columns.size() == 3);
  REQUIRE(t.columns[0].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t.columns[0][i] == a.x(i));
    CHECK(t.columns[1][i] == a[i]);
    CHECK(t.columns[2][i] == b[i]);
  }
  std::ostringstream labelled;
  write_csv(labelled, {a, b}, {0, 7});
  CHECK(labelled.str().rfind("x,f0,f7\n", 0) == 0);
  CHECK_THROWS(write_csv(os, {}));
}

TEST_CASE("svg layout") {
  const GridFunction a(0.0, 1.0, {0.0, 1.0, 0.5});
  std::ostringstream os;
  write_svg(os, {a, a, a});
  const std::string svg = os.str();
  CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  std::size_t count = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++count;
  CHECK(count == 3);
  CHECK(svg.find("#1f77b4") != std::string::npos);
  CHECK(svg.find("#ff7f0e") != std::string::npos);
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(true, true) == 0);
  CHECK(exit_code(false, true) == 2);
  CHECK(exit_code(false, false) == 2);
  CHECK(exit_code(true, false) == 3);
}

TEST_CASE("run exa1 writes all artifacts") {
  const fs::path dir = scratch("exa1");
  RunOptions o;
  o.out_dir = dir.string();
  const RunResult r = run(builtin_scenario("exa1"), o);
  REQUIRE(r.error.empty());
  CHECK(r.exit_code == 0);
  CHECK(r.certificate->S == 0.5);
  CHECK(r.written.size() == 3);

  std::ifstream csv(dir / "exa1.csv");
  const CsvTable t = read_csv(csv);
  CHECK(t.header[0] == "x");
  CHECK(t.header[1] == "f0");
  CHECK(t.header[2] == "f1");
  CHECK(t.columns[0][0] == 0.0);
  CHECK(t.columns[2][0] == 0.0);
  // Dense-quadrature oracle for f1(0): the integrand ge(1 - t, 2 - t) vanishes.
  const double f1_0 = oracle::integrate_t([](double t) { return (0.0 >= 2.0 - t) ? 1.0 : 0.0; }, 1.0, 2.0);
  CHECK(f1_0 == 0.0);

  const auto j = nlohmann::json::parse(slurp(dir / "exa1.json"));
  for (const char* key : {"scenario", "certificate", "iterations", "residuals", "bounds", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["certificate"]["S"].get<double>() == 0.5);
  CHECK(j["certificate"]["criterion"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(j["iterations"]["converged"].get<bool>());
  CHECK(slurp(dir / "exa1.svg").find("<svg") == 0);
}

TEST_CASE("run zero-q converges immediately") {
  Scenario sc = builtin_scenario("exa1");
  sc.q.formula = parse("0");
  const RunResult r = run(sc);
  REQUIRE(r.error.empty());
  CHECK(r.exit_code == 0);
  CHECK(r.report->iterations == 1);
  CHECK(sup_norm(r.report->last()) == 0.0);
  CHECK(r.written.empty());
}

TEST_CASE("run lp-spike reports three quarters") {
  const fs::path dir = scratch("spike");
  RunOptions o;
  o.out_dir = dir.string();
  const RunResult r = run(builtin_scenario("lp-spike"), o);
  REQUIRE(r.error.empty());
  CHECK(r.exit_code == 0);
  CHECK(r.report->converged);
  const auto j = nlohmann::json::parse(slurp(dir / "lp-spike.json"));
  CHECK(std::fabs(j["certificate"]["criterion"].get<double>() - 0.75) <= 1e-9);
  CHECK(j["certificate"]["kind"] == "lp");
}

TEST_CASE("failing certificate still iterates") {
  Scenario sc = builtin_scenario("exa1");
  sc.s.formula = parse("3");
  sc.k_max = 6;
  const RunResult r = run(sc);
  CHECK(r.exit_code == 2);
  REQUIRE(r.report.has_value());
  CHECK(r.report->iterations == 6);
  CHECK(r.report->warnings.size() >= 2);
}

TEST_CASE("errors become exit code 1") {
  Scenario sc = builtin_scenario("exa1");
  sc.csv = "/nonexistent-dir/out.csv";
  const RunResult r = run(sc);
  CHECK(r.exit_code == 1);
  CHECK(r.error.find("/nonexistent-dir/out.csv") != std::string::npos);

  Scenario bad = builtin_scenario("exa1");
  bad.q.formula = parse("sqrt(-1 - x)");
  const RunResult r2 = run(bad);
  CHECK(r2.exit_code == 1);
  CHECK(r2.error.find("sqrt") != std::string::npos);
}

}  // TEST_SUITE
