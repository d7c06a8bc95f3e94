#include "irb/hit.hpp"

#include <cmath>

namespace irb {

namespace {

constexpr int kRefineSteps = 20;
constexpr double kBoundaryTol = 1e-9;

bool member(const MapFamily& fam, double t, double x) { return fam.in_image(fam.shape(t), x); }

// `out` is a t where x is not hit, `in` one where it is; returns the hit side
// of the bracket after bisection, so endpoints belong to T_x.
double refine(const MapFamily& fam, double x, double out, double in) {
  for (int i = 0; i < kRefineSteps; ++i) {
    const double mid = 0.5 * (out + in);
    if (member(fam, mid, x)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return in;
}

}  // namespace

HitSet hit_times(const MapFamily& fam, double x, const NodeTable& table) {
  HitSet hits;
  const int n_t = table.n_t;
  const double t_first = 1.0;
  const double t_last = static_cast<double>(table.n);

  std::vector<char> in(static_cast<std::size_t>(n_t), 0);
  for (int j = 0; j < n_t; ++j) {
    const NodeShape& s = table.shape[j];
    if (s.direction == Monotonicity::non_monotone) {
      ++hits.excluded_nodes;
      continue;
    }
    in[j] = fam.in_image(s, x) ? 1 : 0;
  }

  int j = 0;
  while (j < n_t) {
    if (!in[j]) {
      ++j;
      continue;
    }
    const int start = j;
    while (j < n_t && in[j]) ++j;
    const int stop = j - 1;

    double lo = 0.0;
    if (start == 0) {
      lo = member(fam, t_first, x) ? t_first : refine(fam, x, t_first, table.t[0]);
    } else {
      lo = refine(fam, x, table.t[start - 1], table.t[start]);
    }
    double hi = 0.0;
    if (stop == n_t - 1) {
      hi = member(fam, t_last, x) ? t_last : refine(fam, x, t_last, table.t[stop]);
    } else {
      hi = refine(fam, x, table.t[stop + 1], table.t[stop]);
    }
    hits.intervals.push_back({lo, hi});
    hits.measure += hi - lo;
  }
  return hits;
}

HitSet hit_times(const MapFamily& fam, double x, int n_t) {
  return hit_times(fam, x, make_node_table(fam, n_t));
}

HitMeasure max_hit_measure(const MapFamily& fam, std::span<const double> grid, int n_t) {
  const NodeTable table = make_node_table(fam, n_t);
  HitMeasure best;
  bool first = true;
  for (double x : grid) {
    const HitSet h = hit_times(fam, x, table);
    if (first || h.measure > best.value) {
      best.value = h.measure;
      best.argmax = x;
      best.resolution = 2.0 * (fam.n() - 1) * static_cast<double>(h.intervals.size()) / n_t;
      first = false;
    }
  }
  return best;
}

double boundary_time_measure(const MapFamily& fam, double x, const NodeTable& table) {
  const Interval dom = fam.domain();
  int count = 0;
  for (int j = 0; j < table.n_t; ++j) {
    const NodeShape& s = table.shape[j];
    if (s.direction == Monotonicity::non_monotone) continue;
    const bool at_lo = s.image.lo > dom.lo + kBoundaryTol && std::fabs(x - s.image.lo) <= kBoundaryTol;
    const bool at_hi = s.image.hi < dom.hi - kBoundaryTol && std::fabs(x - s.image.hi) <= kBoundaryTol;
    if (at_lo || at_hi) ++count;
  }
  return count * table.weight;
}

double boundary_time_measure(const MapFamily& fam, double x, int n_t) {
  return boundary_time_measure(fam, x, make_node_table(fam, n_t));
}

}  // namespace irb
