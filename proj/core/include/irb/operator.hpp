#pragma once

#include <cstddef>
#include <vector>

#include "irb/expr.hpp"
#include "irb/family.hpp"
#include "irb/grid.hpp"

namespace irb {

/// Everything needed to discretize the integral RB operator
///
///     T(f)(x) = int_{T_x} q_t(l_t^{-1} x) + s_t(l_t^{-1} x) f(l_t^{-1} x) dt
///
/// on the grid x_i = a + delta + i (b - a - delta)/(n_x - 1) with n_t
/// midpoint nodes in t.
struct OperatorSpec {
  MapFamily fam;
  FunctionFamily q;
  FunctionFamily s;
  int n_t = 512;
  int n_x = 1025;
  double inv_tol = 1e-12;
  double delta = 0.0;
  Space space;

  double grid_lo() const { return fam.domain().lo + delta; }
  double grid_hi() const { return fam.domain().hi; }
  GridFunction constant(double v) const;
  std::vector<double> grid() const;

  /// Throws std::invalid_argument on n_t < 2, n_x < 2, delta out of range,
  /// or families with mismatched n.
  void validate() const;
};

/// Affine operator on grid functions over a fixed grid.
class GridOperator {
 public:
  virtual ~GridOperator() = default;
  virtual GridFunction apply(const GridFunction& f) const = 0;
  virtual GridFunction zero() const = 0;
};

/// Discretized iRB operator. Construction pulls every (x_i, t_j) pair back
/// through l_t once; apply() then only interpolates f. Per-point sums run in
/// ascending j, so results do not depend on the thread schedule.
class IrbOperator final : public GridOperator {
 public:
  explicit IrbOperator(OperatorSpec spec);

  GridFunction apply(const GridFunction& f) const override;
  GridFunction zero() const override { return spec_.constant(0.0); }

  const OperatorSpec& spec() const { return spec_; }
  /// Number of t-nodes skipped because l_t is not injective there.
  int non_injective_nodes() const { return non_injective_; }

 private:
  struct Pullback {
    double y;
    double q;
    double s;
  };

  OperatorSpec spec_;
  double weight_ = 0.0;
  int non_injective_ = 0;
  std::vector<std::size_t> offsets_;  // CSR over grid points
  std::vector<Pullback> entries_;
};

GridFunction apply_irb(const OperatorSpec& spec, const GridFunction& f);

/// Parameters l_i, q_i, s_i (functions of x) of a classical RB operator.
struct BaseTriple {
  std::vector<expr::Expr> l;
  std::vector<expr::Expr> q;
  std::vector<expr::Expr> s;

  int n() const { return static_cast<int>(l.size()); }
  /// Throws std::invalid_argument unless all lists share a length n >= 2.
  void validate() const;
};

/// Classical RB operator sum_i [q_i + s_i f](l_i^{-1} x) 1_{X_i}(x) with
/// images taken [lo, hi) except at the right end of the domain.
class RbOperator final : public GridOperator {
 public:
  /// Grid x_i = grid_lo + i (b - grid_lo)/(n_x - 1).
  RbOperator(BaseTriple base, Interval domain, double grid_lo, std::size_t n_x);

  GridFunction apply(const GridFunction& f) const override;
  GridFunction zero() const override;

 private:
  struct Pullback {
    double y;
    double q;
    double s;
  };

  BaseTriple base_;
  Interval domain_;
  double grid_lo_ = 0.0;
  std::size_t n_x_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Pullback> entries_;
};

GridFunction apply_rb(const BaseTriple& base, Interval domain, const GridFunction& f);

}  // namespace irb
