#pragma once

#include <span>
#include <string>
#include <vector>

#include "irb/family.hpp"
#include "irb/grid.hpp"
#include "irb/operator.hpp"

namespace irb {

/// Result of a contraction check.
///
/// bounded: criterion = S * M, with S = sup |s| and M = sup_x lambda(T_x).
/// lp:      criterion = (n - 1) * S * L^(1/p), with L = sup |d l_t / dx|.
/// A certificate passes iff its criterion is strictly below 1.
struct Certificate {
  enum class Kind { bounded, lp };
  enum class Method { exact_affine, sampled };

  Kind kind = Kind::bounded;
  Method method = Method::sampled;
  double S = 0.0;
  double M = 0.0;
  double M_resolution = 0.0;
  double L = 0.0;
  double p = 1.0;
  int n = 2;
  double criterion = 0.0;
  bool pass = false;
  int samples_t = 0;
  int samples_x = 0;
  int non_injective_probes = 0;
};

std::string to_string(Certificate::Kind kind);
std::string to_string(Certificate::Method method);

Certificate certify_bounded(const OperatorSpec& spec, int n_t, int n_x);
Certificate certify_lp(const OperatorSpec& spec, double p, int n_t, int n_x);

/// Estimated measures of discontinuity times at one probe point.
struct ContinuityProbe {
  double x = 0.0;
  double inverse = 0.0;   // D_x(l^-1)
  double q = 0.0;         // D_x(q o l^-1)
  double s = 0.0;         // D_x(s o l^-1)
  double boundary = 0.0;  // lambda{t : x in boundary of X_t}
};

struct ContinuityReport {
  std::vector<ContinuityProbe> probes;
  double threshold = 0.0;  // (n - 1)/n_t
  /// Heuristic: every measure below the threshold at every probe.
  bool predicts_continuous = false;
};

/// Jump scores |g(t, x+e) - g(t, x-e)| with e = 2 * (spec grid step); a node
/// counts as a discontinuity time when the score exceeds 10 e times the
/// one-sided slope seen just outside [x-e, x+e]. Nodes where x is within 2e
/// of the boundary of X_t are left to the boundary measure.
ContinuityReport continuity_diagnostic(const OperatorSpec& spec, std::span<const double> probes,
                                       int n_t);

/// Extensions of an RB triple with the given homotopy, q and s optionally
/// with endpoint doubling, discretized on `grid_lo .. domain.hi`.
OperatorSpec embedded_spec(const BaseTriple& base, const Homotopy& h, Interval domain,
                           double grid_lo, int n_x, int n_t, bool double_ends = true);

/// Sup-grid distance between the RB operator and the iRB operator of its
/// step-homotopy extension (with endpoint doubling), both applied to f.
/// Throws std::invalid_argument unless n_t is divisible by 2(n - 1).
double embed_rb_check(const BaseTriple& base, Interval domain, const GridFunction& f, int n_t);

struct ApproxStudy {
  std::vector<int> ks;
  std::vector<double> error;  // e_k = ||T^(k) f - T f||_inf
  std::vector<double> bound;  // 2 (n-1) (C_q + C_s ||f||) / k
  double c_q = 0.0;
  double c_s = 0.0;
  double slope = 0.0;  // least-squares slope of log e_k against log k
  double nonuniform_probe = 0.0;
  std::vector<std::string> warnings;
};

/// Compares the RB operator with the iRB operators of ramp-homotopy
/// extensions h^(k) (endpoint doubling on). nonuniform_probe takes the same
/// maps with q = 0, s = 1 undoubled and measures the distance between the
/// step and ramp(k_max) extensions applied to f = k_max 1_[a,b); in the
/// continuum it is at least 1 for every k.
ApproxStudy approx_rb_study(const BaseTriple& base, Interval domain, std::span<const int> ks,
                            const GridFunction& f, int n_t);

}  // namespace irb
