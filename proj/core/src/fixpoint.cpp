#include "irb/fixpoint.hpp"

#include <stdexcept>

namespace irb {

std::vector<GridFunction> iterate(const GridOperator& op, const GridFunction& f0, int k) {
  if (k < 1) throw std::invalid_argument("iterate needs k >= 1");
  std::vector<GridFunction> out;
  out.reserve(static_cast<std::size_t>(k) + 1);
  out.push_back(f0);
  for (int i = 1; i <= k; ++i) out.push_back(op.apply(out.back()));
  return out;
}

double a_posteriori_bound(double contraction, double residual) {
  return contraction / (1.0 - contraction) * residual;
}

IterationReport solve(const GridOperator& op, const GridFunction& f0, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve needs tol > 0");
  if (opts.k_max < 1) throw std::invalid_argument("solve needs k_max >= 1");

  const bool with_bounds = opts.contraction && *opts.contraction < 1.0;
  IterationReport rep;
  rep.kept.push_back(f0);
  rep.kept_index.push_back(0);

  GridFunction current = f0;
  int growth_streak = 0;
  bool warned = false;
  for (int k = 1; k <= opts.k_max; ++k) {
    GridFunction next = op.apply(current);
    const double r = distance(next, current, opts.space);
    if (!rep.residuals.empty() && r > rep.residuals.back()) {
      ++growth_streak;
    } else {
      growth_streak = 0;
    }
    if (growth_streak >= 3 && !warned) {
      rep.warnings.push_back("NotContractive: residual increased for 3 consecutive steps (k = " +
                             std::to_string(k) + ")");
      warned = true;
    }
    rep.residuals.push_back(r);
    if (with_bounds) rep.bounds.push_back(a_posteriori_bound(*opts.contraction, r));
    rep.iterations = k;
    current = std::move(next);
    if (k < opts.keep_first) {
      rep.kept.push_back(current);
      rep.kept_index.push_back(k);
    }
    if (r <= opts.tol) {
      rep.converged = true;
      break;
    }
  }
  if (rep.kept_index.back() != rep.iterations) {
    rep.kept.push_back(current);
    rep.kept_index.push_back(rep.iterations);
  }
  return rep;
}

}  // namespace irb
