#include "irb/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace irb {

using expr::Expr;
using expr::Var;

NonInjectiveError::NonInjectiveError(double t)
    : std::runtime_error("l_t is not injective at t = " + std::to_string(t)), t_(t) {}

// ---------------------------------------------------------------------------
// Homotopy

Homotopy Homotopy::identity() { return Homotopy(); }

Homotopy Homotopy::step(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw FamilyError("step homotopy needs theta in (0, 1]");
  Homotopy h;
  h.kind_ = Kind::step;
  h.theta_ = theta;
  return h;
}

Homotopy Homotopy::ramp(int k) {
  if (k < 2) throw FamilyError("ramp homotopy needs k >= 2");
  Homotopy h;
  h.kind_ = Kind::ramp;
  h.k_ = k;
  return h;
}

Homotopy Homotopy::custom(Expr formula) {
  Homotopy h;
  h.kind_ = Kind::custom;
  h.formula_ = std::move(formula);
  const double h0 = h(0.0);
  const double h1 = h(1.0);
  if (std::fabs(h0) > 1e-12 || std::fabs(h1 - 1.0) > 1e-12) {
    throw FamilyError("custom homotopy must satisfy h(0) = 0 and h(1) = 1, got h(0) = " +
                      std::to_string(h0) + ", h(1) = " + std::to_string(h1));
  }
  return h;
}

Homotopy Homotopy::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  const auto open = text.find('(');
  const std::string_view head = trim(text.substr(0, open));
  std::string_view arg;
  if (open != std::string_view::npos) {
    if (text.back() != ')') throw FamilyError("homotopy: missing ')' in '" + std::string(text) + "'");
    arg = trim(text.substr(open + 1, text.size() - open - 2));
  }
  auto number = [&](std::string_view s) {
    const Expr e = expr::parse(s);
    const auto v = expr::fold_constant(e);
    if (!v) throw FamilyError("homotopy: argument must be a constant, got '" + std::string(s) + "'");
    return *v;
  };
  if (head == "identity" || head == "id") return identity();
  if (head == "step") return open == std::string_view::npos ? step() : step(number(arg));
  if (head == "ramp") {
    const double k = number(arg);
    if (std::trunc(k) != k) throw FamilyError("ramp homotopy needs an integer k");
    return ramp(static_cast<int>(k));
  }
  if (head == "custom") return custom(expr::parse(arg));
  throw FamilyError("unknown homotopy '" + std::string(text) + "'");
}

double Homotopy::operator()(double u) const {
  switch (kind_) {
    case Kind::identity:
      return u;
    case Kind::step:
      return u >= theta_ ? 1.0 : 0.0;
    case Kind::ramp: {
      const double k = k_;
      if (u <= 0.5 - 1.0 / k) return 0.0;
      if (u < 0.5) return k * (u + 1.0 / k - 0.5);
      return 1.0;
    }
    case Kind::custom:
      return expr::eval(formula_, u, u);
  }
  return u;
}

bool Homotopy::maps_into_unit_interval() const {
  if (kind_ != Kind::custom) return true;
  constexpr int kSamples = 1025;
  for (int i = 0; i < kSamples; ++i) {
    const double v = (*this)(static_cast<double>(i) / (kSamples - 1));
    if (v < 0.0 || v > 1.0) return false;
  }
  return true;
}

std::string Homotopy::to_string() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::step: {
      std::ostringstream os;
      os.precision(17);
      os << "step(" << theta_ << ")";
      return os.str();
    }
    case Kind::ramp:
      return "ramp(" + std::to_string(k_) + ")";
    case Kind::custom:
      return "custom(" + expr::to_string(formula_) + ")";
  }
  return "identity";
}

bool operator==(const Homotopy& a, const Homotopy& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Homotopy::Kind::identity:
      return true;
    case Homotopy::Kind::step:
      return a.theta_ == b.theta_;
    case Homotopy::Kind::ramp:
      return a.k_ == b.k_;
    case Homotopy::Kind::custom:
      return a.formula_ == b.formula_;
  }
  return false;
}

// ---------------------------------------------------------------------------
// FunctionFamily

FunctionFamily FunctionFamily::direct(Expr formula, int n) {
  if (n < 2) throw FamilyError("family needs n >= 2, got " + std::to_string(n));
  FunctionFamily f;
  f.n_ = n;
  f.formula_ = std::move(formula);
  return f;
}

FunctionFamily FunctionFamily::extended(std::vector<Expr> base, Homotopy h) {
  if (base.size() < 2) {
    throw FamilyError("extension needs at least 2 base functions, got " +
                      std::to_string(base.size()));
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (expr::depends_on(base[i], Var::t)) {
      throw FamilyError("base function " + std::to_string(i + 1) + " ('" +
                        expr::to_string(base[i]) + "') must depend on x only");
    }
  }
  FunctionFamily f;
  f.extended_ = true;
  f.n_ = static_cast<int>(base.size());
  f.base_ = std::move(base);
  f.homotopy_ = std::move(h);
  return f;
}

double FunctionFamily::operator()(double t, double x) const {
  if (!extended_) return expr::eval(formula_, t, x);
  const double tc = std::clamp(t, 1.0, static_cast<double>(n_));
  const int i = std::min(static_cast<int>(std::floor(tc)), n_ - 1);
  const double w = homotopy_(tc - i);
  const double lower = expr::eval(base_[i - 1], t, x);
  const double upper = expr::eval(base_[i], t, x);
  return (1.0 - w) * lower + w * upper;
}

std::optional<int> FunctionFamily::degree_in_x() const {
  if (!extended_) return expr::degree(formula_, Var::x);
  int d = 0;
  for (const auto& b : base_) {
    const auto bd = expr::degree(b, Var::x);
    if (!bd) return std::nullopt;
    d = std::max(d, *bd);
  }
  return d;
}

std::optional<double> FunctionFamily::exact_abs_max(Interval domain) const {
  double best = 0.0;
  if (!extended_) {
    const auto dt = expr::degree(formula_, Var::t);
    const auto dx = expr::degree(formula_, Var::x);
    if (!dt || !dx || *dt > 1 || *dx > 1) return std::nullopt;
    for (double t : {1.0, static_cast<double>(n_)}) {
      for (double x : {domain.lo, domain.hi}) {
        best = std::max(best, std::fabs(expr::eval(formula_, t, x)));
      }
    }
    return best;
  }
  if (!homotopy_.maps_into_unit_interval()) return std::nullopt;
  for (const auto& b : base_) {
    const auto dx = expr::degree(b, Var::x);
    if (!dx || *dx > 1) return std::nullopt;
    best = std::max({best, std::fabs(expr::eval(b, 1.0, domain.lo)),
                     std::fabs(expr::eval(b, 1.0, domain.hi))});
  }
  return best;
}

bool operator==(const FunctionFamily& a, const FunctionFamily& b) {
  if (a.extended_ != b.extended_ || a.n_ != b.n_) return false;
  if (!a.extended_) return a.formula_ == b.formula_;
  return a.base_ == b.base_ && a.homotopy_ == b.homotopy_;
}

// ---------------------------------------------------------------------------
// MapFamily

bool image_contains(const Interval& image, double x, double domain_hi) {
  if (x < image.lo - kMembershipTol) return false;
  if (x < image.hi - kMembershipTol) return true;
  return image.hi >= domain_hi - kMembershipTol && x <= image.hi + kMembershipTol;
}

double midpoint_node(int j, int n, int n_t) {
  return 1.0 + (static_cast<double>(j) + 0.5) * static_cast<double>(n - 1) /
                   static_cast<double>(n_t);
}

MapFamily::MapFamily(FunctionFamily l, Interval domain, int cache_nodes)
    : l_(std::move(l)), domain_(domain) {
  if (!(domain_.lo < domain_.hi)) throw FamilyError("domain needs a < b");
  const auto deg = l_.degree_in_x();
  affine_ = deg && *deg <= 1;
  quadratic_ = deg && *deg == 2;

  // Codomain containment on a probe grid, including integer t.
  constexpr int kProbe = 33;
  const int n = l_.n();
  const double slack = 1e-9 * (domain_.hi - domain_.lo);
  for (int i = 0; i < kProbe; ++i) {
    const double t = 1.0 + (n - 1) * static_cast<double>(i) / (kProbe - 1);
    for (int j = 0; j < kProbe; ++j) {
      const double x = domain_.lo + (domain_.hi - domain_.lo) * static_cast<double>(j) / (kProbe - 1);
      const double v = l_(t, x);
      if (v < domain_.lo - slack || v > domain_.hi + slack) {
        std::ostringstream os;
        os << "map family leaves the domain: l(" << t << ", " << x << ") = " << v << " not in ["
           << domain_.lo << ", " << domain_.hi << "]";
        throw FamilyError(os.str());
      }
    }
  }

  cache_nodes_ = std::max(0, cache_nodes);
  cache_.reserve(static_cast<std::size_t>(cache_nodes_));
  for (int j = 0; j < cache_nodes_; ++j) cache_.push_back(classify(midpoint_node(j, n, cache_nodes_)));
}

NodeShape MapFamily::shape(double t) const {
  if (cache_nodes_ > 0) {
    const double pos = (t - 1.0) / (n() - 1) * cache_nodes_ - 0.5;
    const double j = std::round(pos);
    if (j >= 0.0 && j < cache_nodes_ && midpoint_node(static_cast<int>(j), n(), cache_nodes_) == t) {
      return cache_[static_cast<std::size_t>(j)];
    }
  }
  return classify(t);
}

NodeShape MapFamily::classify(double t) const {
  NodeShape s;
  const double a = domain_.lo;
  const double b = domain_.hi;
  const double fa = l_(t, a);
  const double fb = l_(t, b);
  s.anchor = fa;
  s.image = {std::min(fa, fb), std::max(fa, fb)};

  if (affine_) {
    s.affine = true;
    s.slope = (fb - fa) / (b - a);
    if (fb > fa) {
      s.direction = Monotonicity::increasing;
    } else if (fb < fa) {
      s.direction = Monotonicity::decreasing;
    }
    return s;
  }

  if (quadratic_) {
    // One-sided derivatives at both ends are exact for quadratics; the vertex
    // lies strictly inside (a, b) iff they have opposite signs.
    const double half = 0.5 * (b - a);
    const double fm = l_(t, a + half);
    double da = (-3.0 * fa + 4.0 * fm - fb) / (2.0 * half);
    double db = (fa - 4.0 * fm + 3.0 * fb) / (2.0 * half);
    const double eps = 1e-12 * (1.0 + std::max({std::fabs(fa), std::fabs(fm), std::fabs(fb)})) / half;
    if (std::fabs(da) <= eps) da = 0.0;
    if (std::fabs(db) <= eps) db = 0.0;
    if (da * db < 0.0 || (da == 0.0 && db == 0.0)) return s;
    s.direction = (da > 0.0 || db > 0.0) ? Monotonicity::increasing : Monotonicity::decreasing;
    return s;
  }

  int sign = 0;
  double prev = fa;
  for (int i = 1; i < kMonotonicityProbes; ++i) {
    const double x = (i == kMonotonicityProbes - 1)
                         ? b
                         : a + (b - a) * static_cast<double>(i) / (kMonotonicityProbes - 1);
    const double v = (i == kMonotonicityProbes - 1) ? fb : l_(t, x);
    const int d = v > prev ? 1 : (v < prev ? -1 : 0);
    if (d == 0 || (sign != 0 && d != sign)) return s;
    sign = d;
    prev = v;
  }
  s.direction = sign > 0 ? Monotonicity::increasing : Monotonicity::decreasing;
  return s;
}

Interval MapFamily::image_interval(double t) const {
  const NodeShape s = shape(t);
  if (s.direction == Monotonicity::non_monotone) throw NonInjectiveError(t);
  return s.image;
}

bool MapFamily::in_image(const NodeShape& s, double x) const {
  return s.direction != Monotonicity::non_monotone && image_contains(s.image, x, domain_.hi);
}

Inversion MapFamily::invert(double t, double x, double tol) const {
  return invert(shape(t), t, x, tol);
}

Inversion MapFamily::invert(const NodeShape& s, double t, double x, double tol) const {
  if (s.direction == Monotonicity::non_monotone) return {InvertStatus::non_injective, 0.0};
  if (!image_contains(s.image, x, domain_.hi)) return {InvertStatus::not_in_image, 0.0};
  const double a = domain_.lo;
  const double b = domain_.hi;
  if (s.affine) {
    const double y = a + (x - s.anchor) / s.slope;
    return {InvertStatus::ok, std::clamp(y, a, b)};
  }
  const bool increasing = s.direction == Monotonicity::increasing;
  double lo = a;
  double hi = b;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double v = l_(t, mid) - x;
    if (std::fabs(v) <= tol) break;
    if ((v < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    mid = next;
  }
  return {InvertStatus::ok, mid};
}

NodeTable make_node_table(const MapFamily& fam, int n_t) {
  if (n_t < 2) throw FamilyError("need at least 2 quadrature nodes");
  NodeTable table;
  table.n = fam.n();
  table.n_t = n_t;
  table.weight = static_cast<double>(fam.n() - 1) / n_t;
  table.t.resize(static_cast<std::size_t>(n_t));
  table.shape.resize(static_cast<std::size_t>(n_t));
  for (int j = 0; j < n_t; ++j) {
    table.t[j] = midpoint_node(j, fam.n(), n_t);
    table.shape[j] = fam.shape(table.t[j]);
    if (table.shape[j].direction == Monotonicity::non_monotone) ++table.non_injective;
  }
  return table;
}

MapFamily extend(std::vector<Expr> base, Homotopy h, Interval domain) {
  if (base.size() < 2) throw FamilyError("IndexError: extension needs n >= 2 base maps");
  return MapFamily(FunctionFamily::extended(std::move(base), std::move(h)), domain);
}

InjectivityProfile injectivity_profile(const MapFamily& fam, int n_probe) {
  if (n_probe < 2) throw FamilyError("injectivity profile needs at least 2 probes");
  InjectivityProfile out;
  for (int j = 0; j < n_probe; ++j) {
    const double t = midpoint_node(j, fam.n(), n_probe);
    if (fam.shape(t).direction == Monotonicity::non_monotone) out.flagged_t.push_back(t);
  }
  out.non_injective_measure =
      static_cast<double>(out.flagged_t.size()) / n_probe * (fam.n() - 1);
  return out;
}

std::vector<Expr> double_endpoints(std::vector<Expr> vals) {
  if (vals.size() < 2) throw FamilyError("endpoint doubling needs n >= 2");
  vals.front() = expr::scaled(2.0, vals.front());
  vals.back() = expr::scaled(2.0, vals.back());
  return vals;
}

}  // namespace irb
