#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irb/grid.hpp"
#include "irb/operator.hpp"

namespace irb {

struct SolveOptions {
  double tol = 1e-6;
  int k_max = 50;
  Space space;
  /// Certified contraction constant (S*M or (n-1) S L^(1/p)); enables the
  /// a-posteriori bounds when < 1.
  std::optional<double> contraction;
  /// Number of leading iterates kept besides the last one.
  int keep_first = 4;
};

struct IterationReport {
  std::vector<GridFunction> kept;  // leading iterates and the last one
  std::vector<int> kept_index;     // k of each kept iterate
  std::vector<double> residuals;   // r_k = ||f_k - f_{k-1}||, k = 1..iterations
  std::vector<double> bounds;      // c/(1-c) r_k, empty without a certificate
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;

  const GridFunction& last() const { return kept.back(); }
};

/// [f_0, f_1, ..., f_k] with f_i = T(f_{i-1}).
std::vector<GridFunction> iterate(const GridOperator& op, const GridFunction& f0, int k);

/// Picard iteration until r_k <= tol or k_max steps. A NotContractive
/// warning is recorded when the residual grows three steps in a row.
IterationReport solve(const GridOperator& op, const GridFunction& f0, const SolveOptions& opts);

/// c/(1-c) * residual.
double a_posteriori_bound(double contraction, double residual);

}  // namespace irb
