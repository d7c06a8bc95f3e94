#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irb/expr.hpp"
#include "irb/family.hpp"
#include "irb/grid.hpp"
#include "irb/operator.hpp"

namespace irb {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string section, std::string key, int line, const std::string& message);

  const std::string& section() const noexcept { return section_; }
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  std::string section_;
  std::string key_;
  int line_;
};

class ScenarioNotFound : public std::out_of_range {
 public:
  explicit ScenarioNotFound(const std::string& name);
};

/// A parameter family given either as one formula in (t, x) or as a list of
/// base functions of x extended with the scenario homotopy.
struct ParamSpec {
  std::optional<expr::Expr> formula;
  std::vector<expr::Expr> base;
  bool double_ends = false;  // base lists only

  bool is_direct() const { return formula.has_value(); }
  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct InitialGuess {
  enum class Kind { zero, one, expr };
  Kind kind = Kind::zero;
  expr::Expr formula;  // Kind::expr, a function of x

  double operator()(double x) const;
  std::string to_string() const;
  friend bool operator==(const InitialGuess&, const InitialGuess&) = default;
};

struct Scenario {
  std::string name;

  // [domain]
  double a = 0.0;
  double b = 1.0;
  int n_x = 1025;
  double delta = 0.0;

  // [time]
  int n = 2;
  int n_t = 512;

  // [maps], [q], [s]
  ParamSpec maps;
  Homotopy homotopy = Homotopy::identity();
  ParamSpec q;
  ParamSpec s;

  // [run]
  Space space;
  double tol = 1e-6;
  int k_max = 50;
  InitialGuess f0;

  // [output]
  std::string csv;
  std::string svg;
  std::string report;

  Interval domain() const { return {a, b}; }
  OperatorSpec operator_spec() const;
  GridFunction initial() const;

  /// Base triple at integer t: the base lists when given, otherwise the
  /// formulas with t bound to 1..n. Doubling is not applied.
  BaseTriple base_triple() const;

  /// Throws ConfigError (line 0) if an invariant is broken.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// INI-style scenario text:
///
///     [domain]  a, b, nx (1025), delta (0)
///     [time]    n (taken from the base lists if omitted), nt (512)
///     [maps]    formula = <expr in t,x>  |  base = e1; e2; ...  homotopy = ...
///     [q], [s]  formula = ...  |  base = ...  double = true|false
///     [run]     name, space (sup | lp(p)), tol (1e-6), kmax (50), f0 (zero | one | <expr in x>)
///     [output]  csv, svg, report
///
/// `#` and `;` at the start of a line begin comments.
Scenario parse_config(std::string_view text);
Scenario load_config(const std::string& path);

/// Canonical text that parse_config maps back to an equal Scenario.
std::string write_config(const Scenario& sc);

struct BuiltinScenario {
  std::string name;
  std::string summary;
  std::string text;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
/// Throws ScenarioNotFound.
const BuiltinScenario& find_builtin(std::string_view name);
Scenario builtin_scenario(std::string_view name);

}  // namespace irb
