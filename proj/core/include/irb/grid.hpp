#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irb {

/// Function space the iteration is measured in.
struct Space {
  enum class Kind { sup, lp };
  Kind kind = Kind::sup;
  double p = 1.0;

  static Space sup() { return {}; }
  static Space lp(double p);
  /// "sup" or "lp(p)".
  static Space parse(const std::string& text);
  std::string to_string() const;
  friend bool operator==(const Space&, const Space&) = default;
};

/// Samples on the uniform grid x_i = lo + i (hi - lo)/(N - 1), evaluated
/// between nodes by linear interpolation.
class GridFunction {
 public:
  GridFunction(double lo, double hi, std::vector<double> values);

  static GridFunction constant(double lo, double hi, std::size_t n, double v);
  template <class F>
  static GridFunction sample(double lo, double hi, std::size_t n, F&& f) {
    GridFunction g = constant(lo, hi, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) g.values_[i] = f(g.x(i));
    return g;
  }

  std::size_t size() const { return values_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return (hi_ - lo_) / static_cast<double>(values_.size() - 1); }
  double x(std::size_t i) const;
  std::vector<double> nodes() const;

  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  /// Linear interpolant; throws std::out_of_range outside [lo, hi].
  double at(double x) const;
  /// Linear interpolant with x clamped into [lo, hi].
  double at_clamped(double x) const;

  bool same_grid(const GridFunction& other) const;

  /// a*f + b*g on a shared grid.
  static GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g);

 private:
  double lo_;
  double hi_;
  std::vector<double> values_;
};

double sup_norm(const GridFunction& f);
/// Composite trapezoid of |f|^p, then the p-th root.
double p_norm(const GridFunction& f, double p);
double norm(const GridFunction& f, const Space& space);
double distance(const GridFunction& f, const GridFunction& g, const Space& space);

}  // namespace irb
