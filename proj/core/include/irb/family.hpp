#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irb/expr.hpp"

namespace irb {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Raised for invalid family construction (too few base maps, codomain
/// violations, a homotopy that does not fix 0 and 1).
class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonInjectiveError : public std::runtime_error {
 public:
  explicit NonInjectiveError(double t);
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Profile h : [0,1] -> [0,1] with h(0) = 0 and h(1) = 1 that blends
/// neighbouring base maps.
class Homotopy {
 public:
  enum class Kind { identity, step, ramp, custom };

  static Homotopy identity();
  /// Indicator of [theta, 1].
  static Homotopy step(double theta = 0.5);
  /// 0 on [0, 1/2 - 1/k], slope k on (1/2 - 1/k, 1/2), 1 on [1/2, 1].
  static Homotopy ramp(int k);
  /// Formula in one variable u; both `t` and `x` are bound to u.
  static Homotopy custom(expr::Expr formula);

  /// Accepts "identity", "step", "step(θ)", "ramp(k)" and "custom(<expr>)".
  static Homotopy parse(std::string_view text);

  double operator()(double u) const;

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  int k() const { return k_; }
  const expr::Expr& formula() const { return formula_; }

  /// Whether h maps [0,1] into [0,1] (exact for builtins, sampled for custom).
  bool maps_into_unit_interval() const;

  std::string to_string() const;
  friend bool operator==(const Homotopy& a, const Homotopy& b);

 private:
  Homotopy() = default;
  Kind kind_ = Kind::identity;
  double theta_ = 0.5;
  int k_ = 2;
  expr::Expr formula_;
};

/// A scalar family g(t, x) on t in [1, n]: either a direct formula or the
/// extension of n base functions of x with respect to a homotopy,
///
///     g(t, .) = (1 - h(u)) g_i + h(u) g_{i+1},  i = floor(t), u = t - i,
///
/// with i clamped to n - 1 at t = n.
class FunctionFamily {
 public:
  static FunctionFamily direct(expr::Expr formula, int n);
  static FunctionFamily extended(std::vector<expr::Expr> base, Homotopy h);

  double operator()(double t, double x) const;

  int n() const { return n_; }
  bool is_extended() const { return extended_; }
  const expr::Expr& formula() const { return formula_; }
  const std::vector<expr::Expr>& base() const { return base_; }
  const Homotopy& homotopy() const { return homotopy_; }

  /// Polynomial degree in x, nullopt if not polynomial.
  std::optional<int> degree_in_x() const;

  /// Upper bound of |g| over [1,n] x [lo,hi] that is exact when the family is
  /// multilinear in (t, x) (direct) or built from base functions that are
  /// affine in x through a homotopy with values in [0,1] (extended).
  std::optional<double> exact_abs_max(Interval domain) const;

  friend bool operator==(const FunctionFamily& a, const FunctionFamily& b);

 private:
  FunctionFamily() = default;
  bool extended_ = false;
  int n_ = 2;
  expr::Expr formula_;
  std::vector<expr::Expr> base_;
  Homotopy homotopy_ = Homotopy::identity();
};

enum class Monotonicity { increasing, decreasing, non_monotone };

/// Per-t classification of l_t together with its image interval.
struct NodeShape {
  Monotonicity direction = Monotonicity::non_monotone;
  bool affine = false;
  Interval image;       // valid only when monotone
  double anchor = 0.0;  // l(t, a)
  double slope = 0.0;   // affine maps only
};

enum class InvertStatus { ok, not_in_image, non_injective };

struct Inversion {
  InvertStatus status = InvertStatus::not_in_image;
  double y = 0.0;
};

/// Tolerance for membership tests at image endpoints.
inline constexpr double kMembershipTol = 1e-12;

/// Membership x in X_t. Images are taken half-open [lo, hi), closed on the
/// right only when hi reaches the right end of the domain, so that adjacent
/// images of a partition never both claim their shared endpoint.
bool image_contains(const Interval& image, double x, double domain_hi);

/// Quadrature node j in [0, n_t): 1 + (j + 1/2)(n - 1)/n_t.
double midpoint_node(int j, int n, int n_t);

/// The map family l : [1,n] x [a,b] -> [a,b].
class MapFamily {
 public:
  static constexpr int kDefaultCacheNodes = 512;
  static constexpr int kMonotonicityProbes = 129;

  MapFamily(FunctionFamily l, Interval domain, int cache_nodes = kDefaultCacheNodes);

  double apply(double t, double x) const { return l_(t, x); }

  NodeShape shape(double t) const;
  /// Sorted {l(t,a), l(t,b)}; throws NonInjectiveError for non-monotone t.
  Interval image_interval(double t) const;

  bool in_image(const NodeShape& s, double x) const;
  Inversion invert(double t, double x, double tol) const;
  Inversion invert(const NodeShape& s, double t, double x, double tol) const;

  int n() const { return l_.n(); }
  const Interval& domain() const { return domain_; }
  const FunctionFamily& formula() const { return l_; }
  bool affine() const { return affine_; }

 private:
  NodeShape classify(double t) const;

  FunctionFamily l_;
  Interval domain_;
  bool affine_ = false;
  bool quadratic_ = false;
  int cache_nodes_ = 0;
  std::vector<NodeShape> cache_;
};

/// Shapes of l_t at the midpoint quadrature nodes.
struct NodeTable {
  int n = 2;
  int n_t = 0;
  double weight = 0.0;  // (n - 1)/n_t
  std::vector<double> t;
  std::vector<NodeShape> shape;
  int non_injective = 0;
};

NodeTable make_node_table(const MapFamily& fam, int n_t);

MapFamily extend(std::vector<expr::Expr> base, Homotopy h, Interval domain);

struct InjectivityProfile {
  double non_injective_measure = 0.0;
  std::vector<double> flagged_t;
};

InjectivityProfile injectivity_profile(const MapFamily& fam, int n_probe);

/// Multiplies the first and last entries by 2.
std::vector<expr::Expr> double_endpoints(std::vector<expr::Expr> vals);

}  // namespace irb
