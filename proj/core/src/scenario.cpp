#include "irb/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace irb {

ConfigError::ConfigError(std::string section, std::string key, int line, const std::string& message)
    : std::runtime_error([&] {
        std::string where = "[" + section + "]";
        if (!key.empty()) where += " " + key;
        if (line > 0) where = "line " + std::to_string(line) + ": " + where;
        return where + ": " + message;
      }()),
      section_(std::move(section)),
      key_(std::move(key)),
      line_(line) {}

ScenarioNotFound::ScenarioNotFound(const std::string& name)
    : std::out_of_range("no builtin scenario named '" + name + "'") {}

double InitialGuess::operator()(double x) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::one: return 1.0;
    case Kind::expr: return expr::eval(formula, 0.0, x);
  }
  return 0.0;
}

std::string InitialGuess::to_string() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::one: return "one";
    case Kind::expr: return expr::to_string(formula);
  }
  return "zero";
}

namespace {

constexpr std::array<std::string_view, 7> kSections = {"domain", "time", "maps", "q",
                                                       "s",      "run",  "output"};

const std::map<std::string_view, std::vector<std::string_view>>& known_keys() {
  static const std::map<std::string_view, std::vector<std::string_view>> keys = {
      {"domain", {"a", "b", "nx", "delta"}},
      {"time", {"n", "nt"}},
      {"maps", {"formula", "base", "homotopy"}},
      {"q", {"formula", "base", "double"}},
      {"s", {"formula", "base", "double"}},
      {"run", {"name", "space", "tol", "kmax", "f0"}},
      {"output", {"csv", "svg", "report"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry, std::less<>> entries;
};

class Document {
 public:
  explicit Document(std::string_view text) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      const std::string_view line = trim(text.substr(pos, end - pos));
      ++line_no;
      pos = end + 1;
      if (line.empty() || line.front() == '#' || line.front() == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError(current, "", line_no, "unterminated section header");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (std::find(kSections.begin(), kSections.end(), current) == kSections.end()) {
          throw ConfigError(current, "", line_no, "unknown section");
        }
        if (sections_.count(current) != 0) throw ConfigError(current, "", line_no, "duplicate section");
        sections_[current].line = line_no;
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError(current, "", line_no, "expected 'key = value'");
      if (current.empty()) throw ConfigError("", "", line_no, "key outside of any section");
      const std::string key(trim(line.substr(0, eq)));
      const auto& allowed = known_keys().at(current);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError(current, key, line_no, "unknown key");
      }
      auto& entries = sections_[current].entries;
      if (entries.count(key) != 0) throw ConfigError(current, key, line_no, "duplicate key");
      entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
    }
    last_line_ = line_no;
  }

  bool has(std::string_view section) const { return sections_.count(std::string(section)) != 0; }

  const Section& section(const std::string& name) const {
    const auto it = sections_.find(name);
    if (it == sections_.end()) throw ConfigError(name, "", last_line_, "missing mandatory section");
    return it->second;
  }

  const Entry* find(const std::string& sec, std::string_view key) const {
    const auto it = sections_.find(sec);
    if (it == sections_.end()) return nullptr;
    const auto e = it->second.entries.find(key);
    return e == it->second.entries.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& sec, std::string_view key) const {
    const Section& s = section(sec);
    const auto e = s.entries.find(key);
    if (e == s.entries.end()) throw ConfigError(sec, std::string(key), s.line, "missing mandatory key");
    return e->second;
  }

 private:
  std::map<std::string, Section> sections_;
  int last_line_ = 0;
};

expr::Expr parse_expr(const std::string& sec, const std::string& key, const Entry& e) {
  try {
    return expr::parse(e.value);
  } catch (const expr::LexError& err) {
    throw ConfigError(sec, key, e.line, std::string("bad expression: ") + err.what());
  } catch (const expr::ParseError& err) {
    throw ConfigError(sec, key, e.line, std::string("bad expression: ") + err.what());
  }
}

// Numbers may be written as constant expressions ("1/2", "1e-6").
double parse_number(const std::string& sec, const std::string& key, const Entry& e) {
  const auto v = expr::fold_constant(parse_expr(sec, key, e));
  if (!v) throw ConfigError(sec, key, e.line, "expected a constant, got '" + e.value + "'");
  return *v;
}

int parse_int(const std::string& sec, const std::string& key, const Entry& e) {
  int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) {
    throw ConfigError(sec, key, e.line, "expected an integer, got '" + e.value + "'");
  }
  return v;
}

bool parse_bool(const std::string& sec, const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ConfigError(sec, key, e.line, "expected true or false, got '" + e.value + "'");
}

std::vector<expr::Expr> parse_list(const std::string& sec, const std::string& key, const Entry& e) {
  std::vector<expr::Expr> out;
  std::size_t pos = 0;
  while (pos <= e.value.size()) {
    const std::size_t end = std::min(e.value.find(';', pos), e.value.size());
    Entry item{std::string(trim(std::string_view(e.value).substr(pos, end - pos))), e.line};
    if (item.value.empty()) throw ConfigError(sec, key, e.line, "empty list item");
    out.push_back(parse_expr(sec, key, item));
    pos = end + 1;
  }
  return out;
}

ParamSpec parse_param(const Document& doc, const std::string& sec) {
  const Section& s = doc.section(sec);
  const Entry* formula = doc.find(sec, "formula");
  const Entry* base = doc.find(sec, "base");
  if ((formula == nullptr) == (base == nullptr)) {
    throw ConfigError(sec, "formula", s.line, "exactly one of 'formula' and 'base' is required");
  }
  ParamSpec p;
  if (formula != nullptr) {
    p.formula = parse_expr(sec, "formula", *formula);
    if (const Entry* d = doc.find(sec, "double")) {
      if (parse_bool(sec, "double", *d)) {
        throw ConfigError(sec, "double", d->line, "endpoint doubling applies to base lists only");
      }
    }
  } else {
    p.base = parse_list(sec, "base", *base);
    if (const Entry* d = doc.find(sec, "double")) p.double_ends = parse_bool(sec, "double", *d);
  }
  return p;
}

std::string number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string list(const std::vector<expr::Expr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += expr::to_string(items[i]);
  }
  return out;
}

FunctionFamily family_of(const ParamSpec& p, int n, const Homotopy& h) {
  if (p.is_direct()) return FunctionFamily::direct(*p.formula, n);
  return FunctionFamily::extended(p.double_ends ? double_endpoints(p.base) : p.base, h);
}

std::vector<expr::Expr> at_integer_times(const ParamSpec& p, int n) {
  if (!p.is_direct()) return p.base;
  std::vector<expr::Expr> out;
  for (int i = 1; i <= n; ++i) out.push_back(expr::bind(*p.formula, expr::Var::t, i));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorSpec Scenario::operator_spec() const {
  validate();
  MapFamily fam = maps.is_direct() ? MapFamily(FunctionFamily::direct(*maps.formula, n), domain())
                                   : extend(maps.base, homotopy, domain());
  return OperatorSpec{
      .fam = std::move(fam),
      .q = family_of(q, n, homotopy),
      .s = family_of(s, n, homotopy),
      .n_t = n_t,
      .n_x = n_x,
      .inv_tol = 1e-12,
      .delta = delta,
      .space = space,
  };
}

GridFunction Scenario::initial() const {
  return GridFunction::sample(a + delta, b, static_cast<std::size_t>(n_x), f0);
}

BaseTriple Scenario::base_triple() const {
  return BaseTriple{at_integer_times(maps, n), at_integer_times(q, n), at_integer_times(s, n)};
}

void Scenario::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw ConfigError("domain", "b", 0, "need finite a < b");
  }
  if (n_x < 2) throw ConfigError("domain", "nx", 0, "need nx >= 2");
  if (!(delta >= 0.0) || !(delta < (b - a) / n_x)) {
    throw ConfigError("domain", "delta", 0, "need 0 <= delta < (b - a)/nx");
  }
  if (n < 2) throw ConfigError("time", "n", 0, "need n >= 2");
  if (n_t < 2 || n_t % (2 * (n - 1)) != 0) {
    throw ConfigError("time", "nt", 0,
                      "nt = " + std::to_string(n_t) + " must be divisible by 2(n - 1) = " +
                          std::to_string(2 * (n - 1)));
  }
  if (!(tol > 0.0)) throw ConfigError("run", "tol", 0, "need tol > 0");
  if (k_max < 1) throw ConfigError("run", "kmax", 0, "need kmax >= 1");
  const std::pair<const char*, const ParamSpec*> params[] = {{"maps", &maps}, {"q", &q}, {"s", &s}};
  for (const auto& [sec, p] : params) {
    if (p->is_direct()) continue;
    if (static_cast<int>(p->base.size()) != n) {
      throw ConfigError(sec, "base", 0,
                        "expected " + std::to_string(n) + " base functions, got " +
                            std::to_string(p->base.size()));
    }
    for (const auto& e : p->base) {
      if (expr::depends_on(e, expr::Var::t)) {
        throw ConfigError(sec, "base", 0, "base functions must not depend on t: " + expr::to_string(e));
      }
    }
  }
  if (!homotopy.maps_into_unit_interval()) {
    throw ConfigError("maps", "homotopy", 0, "homotopy must map [0,1] into [0,1]");
  }
  if (f0.kind == InitialGuess::Kind::expr && expr::depends_on(f0.formula, expr::Var::t)) {
    throw ConfigError("run", "f0", 0, "initial guess must depend on x only");
  }
}

Scenario parse_config(std::string_view text) {
  const Document doc(text);
  Scenario sc;

  sc.a = parse_number("domain", "a", doc.require("domain", "a"));
  sc.b = parse_number("domain", "b", doc.require("domain", "b"));
  if (const Entry* e = doc.find("domain", "nx")) sc.n_x = parse_int("domain", "nx", *e);
  if (const Entry* e = doc.find("domain", "delta")) sc.delta = parse_number("domain", "delta", *e);

  sc.maps = parse_param(doc, "maps");
  if (const Entry* e = doc.find("maps", "homotopy")) {
    try {
      sc.homotopy = Homotopy::parse(e->value);
    } catch (const std::exception& err) {
      throw ConfigError("maps", "homotopy", e->line, err.what());
    }
  }
  sc.q = parse_param(doc, "q");
  sc.s = parse_param(doc, "s");

  const Entry* n_entry = doc.find("time", "n");
  if (n_entry != nullptr) {
    sc.n = parse_int("time", "n", *n_entry);
  } else if (!sc.maps.is_direct()) {
    sc.n = static_cast<int>(sc.maps.base.size());
  } else {
    throw ConfigError("time", "n", doc.has("time") ? doc.section("time").line : 0,
                      "missing mandatory key (maps are given by a formula)");
  }
  if (const Entry* e = doc.find("time", "nt")) sc.n_t = parse_int("time", "nt", *e);

  if (const Entry* e = doc.find("run", "name")) sc.name = e->value;
  if (const Entry* e = doc.find("run", "space")) {
    try {
      sc.space = Space::parse(e->value);
    } catch (const std::exception& err) {
      throw ConfigError("run", "space", e->line, err.what());
    }
  }
  if (const Entry* e = doc.find("run", "tol")) sc.tol = parse_number("run", "tol", *e);
  if (const Entry* e = doc.find("run", "kmax")) sc.k_max = parse_int("run", "kmax", *e);
  if (const Entry* e = doc.find("run", "f0")) {
    if (e->value == "zero") {
      sc.f0.kind = InitialGuess::Kind::zero;
    } else if (e->value == "one") {
      sc.f0.kind = InitialGuess::Kind::one;
    } else {
      sc.f0.kind = InitialGuess::Kind::expr;
      sc.f0.formula = parse_expr("run", "f0", *e);
    }
  }

  if (const Entry* e = doc.find("output", "csv")) sc.csv = e->value;
  if (const Entry* e = doc.find("output", "svg")) sc.svg = e->value;
  if (const Entry* e = doc.find("output", "report")) sc.report = e->value;

  // Re-raise invariant violations with the line of the offending key.
  try {
    sc.validate();
  } catch (const ConfigError& err) {
    const Entry* e = doc.find(err.section(), err.key());
    int line = e != nullptr ? e->line : 0;
    if (line == 0 && doc.has(err.section())) line = doc.section(err.section()).line;
    const std::string msg = err.what();
    throw ConfigError(err.section(), err.key(), line, msg.substr(msg.find(": ") + 2));
  }
  return sc;
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const Scenario& sc) {
  std::ostringstream os;
  const auto param = [&os](const char* sec, const ParamSpec& p, bool doubling) {
    os << "\n[" << sec << "]\n";
    if (p.is_direct()) {
      os << "formula = " << expr::to_string(*p.formula) << "\n";
    } else {
      os << "base = " << list(p.base) << "\n";
      if (doubling) os << "double = " << (p.double_ends ? "true" : "false") << "\n";
    }
  };

  os << "[domain]\n"
     << "a = " << number(sc.a) << "\n"
     << "b = " << number(sc.b) << "\n"
     << "nx = " << sc.n_x << "\n"
     << "delta = " << number(sc.delta) << "\n";
  os << "\n[time]\nn = " << sc.n << "\nnt = " << sc.n_t << "\n";
  param("maps", sc.maps, false);
  os << "homotopy = " << sc.homotopy.to_string() << "\n";
  param("q", sc.q, true);
  param("s", sc.s, true);
  os << "\n[run]\n";
  if (!sc.name.empty()) os << "name = " << sc.name << "\n";
  os << "space = " << sc.space.to_string() << "\n"
     << "tol = " << number(sc.tol) << "\n"
     << "kmax = " << sc.k_max << "\n"
     << "f0 = " << sc.f0.to_string() << "\n";
  if (!sc.csv.empty() || !sc.svg.empty() || !sc.report.empty()) {
    os << "\n[output]\n";
    if (!sc.csv.empty()) os << "csv = " << sc.csv << "\n";
    if (!sc.svg.empty()) os << "svg = " << sc.svg << "\n";
    if (!sc.report.empty()) os << "report = " << sc.report << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> all = {
      {"exa1", "discontinuous fixed point: identity homotopy, q = ge(x, 2-t)",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; x/2 + 1/2
homotopy = identity

[q]
formula = ge(x, 2-t)

[s]
formula = (1/2)*x*(t-1)

[run]
name = exa1
space = sup
)"},
      {"exa2", "continuous fixed point: identity homotopy, q = 2x(t-1)",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; x/2 + 1/2
homotopy = identity

[q]
formula = 2*x*(t-1)

[s]
formula = (1/2)*x*(t-1)

[run]
name = exa2
space = sup
)"},
      {"parabola", "RB operator of the parabola 2x(1-x) via the step homotopy",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; x/2 + 1/2
homotopy = step(0.5)

# q and s of the classical operator; doubling makes the two half panels
# carry full weight
[q]
base = x/2; -x/2 + 1/2
double = true

[s]
base = 1/4; 1/4
double = true

[run]
name = parabola
space = sup
)"},
      {"takagi", "Takagi function: the parabola operator with s doubled again",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; x/2 + 1/2
homotopy = step(0.5)

[q]
base = x/2; -x/2 + 1/2
double = true

[s]
base = 1/2; 1/2
double = true

[run]
name = takagi
space = sup
)"},
      {"lp-spike", "L1 setting with the singular q = 1/sqrt(x); criterion 3/4",
       R"([domain]
a = 0
b = 1
# keeps the singularity of q off the grid
delta = 1e-6
# 1025 points would put every node a distance delta from a dyadic preimage
# of 0, where the trapezoid over-weights the spikes
nx = 1024

[time]
n = 2

[maps]
formula = x/2 + ge(t, 1.5)/2

[q]
formula = 1/sqrt(x)

[s]
formula = 1.5

[run]
name = lp-spike
space = lp(1)
tol = 1e-4
)"},
      {"noninjective-demo", "quadratic base pair; l_t is not injective for t in (4/3, 2)",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; 1 - x^2/2
homotopy = identity

[q]
base = x; 1 - x

[s]
base = 1/4; 1/4

[run]
name = noninjective-demo
space = sup
)"},
      {"nonuniform-demo", "q = 0, s = 1 with the step homotopy; ramps converge only pointwise",
       R"([domain]
a = 0
b = 1

[maps]
base = x/2; x/2 + 1/2
homotopy = step(0.5)

[q]
base = 0; 0

[s]
base = 1; 1

[run]
name = nonuniform-demo
space = sup
f0 = one
)"},
  };
  return all;
}

const BuiltinScenario& find_builtin(std::string_view name) {
  for (const auto& b : builtin_scenarios()) {
    if (b.name == name) return b;
  }
  throw ScenarioNotFound(std::string(name));
}

Scenario builtin_scenario(std::string_view name) { return parse_config(find_builtin(name).text); }

}  // namespace irb
