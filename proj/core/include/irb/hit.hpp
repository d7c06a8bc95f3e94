#pragma once

#include <span>
#include <vector>

#include "irb/family.hpp"

namespace irb {

/// The x-hit times T_x = {t in [1,n] : x in X_t} as a finite union of
/// disjoint closed intervals.
struct HitSet {
  std::vector<Interval> intervals;  // sorted, disjoint
  double measure = 0.0;
  int excluded_nodes = 0;  // non-monotone t-nodes skipped
};

/// Detects membership runs on the midpoint nodes of `table` and refines each
/// run endpoint by 20 bisection steps in t.
HitSet hit_times(const MapFamily& fam, double x, const NodeTable& table);
HitSet hit_times(const MapFamily& fam, double x, int n_t);

struct HitMeasure {
  double value = 0.0;       // max over the probe grid of lambda(T_x)
  double argmax = 0.0;      // x attaining it
  double resolution = 0.0;  // 2 (n-1) #intervals / n_t at the maximiser
};

HitMeasure max_hit_measure(const MapFamily& fam, std::span<const double> grid, int n_t);

/// Measure of {t : x in the boundary of X_t relative to [a,b]}.
double boundary_time_measure(const MapFamily& fam, double x, const NodeTable& table);
double boundary_time_measure(const MapFamily& fam, double x, int n_t);

}  // namespace irb
