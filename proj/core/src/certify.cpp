#include "irb/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irb/hit.hpp"

namespace irb {

std::string to_string(Certificate::Kind kind) {
  return kind == Certificate::Kind::bounded ? "bounded" : "lp";
}

std::string to_string(Certificate::Method method) {
  return method == Certificate::Method::exact_affine ? "exact-affine" : "sampled";
}

namespace {

double probe_t(int i, int n, int count) {
  if (i == count - 1) return static_cast<double>(n);
  return 1.0 + static_cast<double>(n - 1) * i / (count - 1);
}

double probe_x(int j, Interval d, int count) {
  if (j == count - 1) return d.hi;
  return d.lo + (d.hi - d.lo) * j / (count - 1);
}

// sup |g| over [1,n] x domain; returns (value, exact).
std::pair<double, bool> abs_sup(const FunctionFamily& g, Interval domain, int n_t, int n_x) {
  if (const auto exact = g.exact_abs_max(domain)) return {*exact, true};
  double best = 0.0;
  for (int i = 0; i < n_t; ++i) {
    const double t = probe_t(i, g.n(), n_t);
    for (int j = 0; j < n_x; ++j) best = std::max(best, std::fabs(g(t, probe_x(j, domain, n_x))));
  }
  return {best, false};
}

void check_counts(int n_t, int n_x) {
  if (n_t < 2 || n_x < 2) throw std::invalid_argument("certificate sampling counts must be >= 2");
}

}  // namespace

Certificate certify_bounded(const OperatorSpec& spec, int n_t, int n_x) {
  check_counts(n_t, n_x);
  Certificate c;
  c.kind = Certificate::Kind::bounded;
  c.n = spec.fam.n();
  c.samples_t = n_t;
  c.samples_x = n_x;
  const auto [S, exact] = abs_sup(spec.s, spec.fam.domain(), n_t, n_x);
  c.S = S;
  c.method = exact ? Certificate::Method::exact_affine : Certificate::Method::sampled;

  std::vector<double> xs(static_cast<std::size_t>(n_x));
  for (int j = 0; j < n_x; ++j) xs[j] = probe_x(j, spec.fam.domain(), n_x);
  const HitMeasure m = max_hit_measure(spec.fam, xs, n_t);
  c.M = m.value;
  c.M_resolution = m.resolution;
  c.non_injective_probes = make_node_table(spec.fam, n_t).non_injective;
  c.criterion = c.S * c.M;
  c.pass = c.criterion < 1.0;
  return c;
}

Certificate certify_lp(const OperatorSpec& spec, double p, int n_t, int n_x) {
  check_counts(n_t, n_x);
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("certify_lp needs p in [1, inf)");
  Certificate c;
  c.kind = Certificate::Kind::lp;
  c.n = spec.fam.n();
  c.p = p;
  c.samples_t = n_t;
  c.samples_x = n_x;
  const Interval d = spec.fam.domain();
  const auto [S, exact] = abs_sup(spec.s, d, n_t, n_x);
  c.S = S;

  constexpr double kStep = 1e-6;
  double L = 0.0;
  for (int i = 0; i < n_t; ++i) {
    const double t = probe_t(i, spec.fam.n(), n_t);
    const NodeShape shape = spec.fam.shape(t);
    if (shape.direction == Monotonicity::non_monotone) {
      ++c.non_injective_probes;
      continue;
    }
    if (shape.affine) {
      L = std::max(L, std::fabs(shape.slope));
      continue;
    }
    for (int j = 0; j < n_x; ++j) {
      const double x = probe_x(j, d, n_x);
      const double lo = std::max(d.lo, x - kStep);
      const double hi = std::min(d.hi, x + kStep);
      L = std::max(L, std::fabs((spec.fam.apply(t, hi) - spec.fam.apply(t, lo)) / (hi - lo)));
    }
  }
  c.L = L;
  c.method = (exact && spec.fam.affine()) ? Certificate::Method::exact_affine
                                          : Certificate::Method::sampled;
  c.criterion = (spec.fam.n() - 1) * c.S * std::pow(c.L, 1.0 / p);
  c.pass = c.criterion < 1.0;
  return c;
}

// ---------------------------------------------------------------------------

namespace {

struct JumpCounter {
  int count = 0;

  void add(const double (&g)[4], double eps) {
    // g = values at x - 2e, x - e, x + e, x + 2e
    const double score = std::fabs(g[2] - g[1]);
    const double slope = std::max(std::fabs(g[3] - g[2]), std::fabs(g[1] - g[0])) / eps;
    const double floor = 1e-12 * (1.0 + std::fabs(g[1]) + std::fabs(g[2]));
    if (score > 10.0 * eps * slope + floor) ++count;
  }
};

}  // namespace

ContinuityReport continuity_diagnostic(const OperatorSpec& spec, std::span<const double> probes,
                                       int n_t) {
  if (probes.empty()) throw std::invalid_argument("continuity diagnostic needs probe points");
  const NodeTable table = make_node_table(spec.fam, n_t);
  const Interval d = spec.fam.domain();
  const double eps = 2.0 * (spec.grid_hi() - spec.grid_lo()) / (spec.n_x - 1);
  const double offsets[4] = {-2.0 * eps, -eps, eps, 2.0 * eps};

  ContinuityReport rep;
  rep.threshold = table.weight;
  rep.predicts_continuous = true;
  for (double x : probes) {
    ContinuityProbe probe;
    probe.x = x;
    probe.boundary = boundary_time_measure(spec.fam, x, table);

    JumpCounter inv;
    JumpCounter qc;
    JumpCounter sc;
    for (int j = 0; j < table.n_t; ++j) {
      const NodeShape& shape = table.shape[j];
      if (shape.direction == Monotonicity::non_monotone) continue;
      const double t = table.t[j];
      double y[4];
      bool interior = true;
      for (int k = 0; k < 4; ++k) {
        const double xk = x + offsets[k];
        if (xk < d.lo || xk > d.hi) {
          interior = false;
          break;
        }
        const Inversion r = spec.fam.invert(shape, t, xk, spec.inv_tol);
        if (r.status != InvertStatus::ok) {
          interior = false;
          break;
        }
        y[k] = r.y;
      }
      if (!interior) continue;
      double gq[4];
      double gs[4];
      for (int k = 0; k < 4; ++k) {
        gq[k] = spec.q(t, y[k]);
        gs[k] = spec.s(t, y[k]);
      }
      inv.add(y, eps);
      qc.add(gq, eps);
      sc.add(gs, eps);
    }
    probe.inverse = inv.count * table.weight;
    probe.q = qc.count * table.weight;
    probe.s = sc.count * table.weight;
    if (probe.inverse >= rep.threshold || probe.q >= rep.threshold || probe.s >= rep.threshold ||
        probe.boundary >= rep.threshold) {
      rep.predicts_continuous = false;
    }
    rep.probes.push_back(probe);
  }
  return rep;
}

// ---------------------------------------------------------------------------

OperatorSpec embedded_spec(const BaseTriple& base, const Homotopy& h, Interval domain,
                           double grid_lo, int n_x, int n_t, bool double_ends) {
  base.validate();
  auto q = double_ends ? double_endpoints(base.q) : base.q;
  auto s = double_ends ? double_endpoints(base.s) : base.s;
  OperatorSpec spec{
      .fam = extend(base.l, h, domain),
      .q = FunctionFamily::extended(std::move(q), h),
      .s = FunctionFamily::extended(std::move(s), h),
      .n_t = n_t,
      .n_x = n_x,
      .inv_tol = 1e-12,
      .delta = 0.0,
      .space = Space::sup(),
  };
  spec.delta = grid_lo - domain.lo;
  return spec;
}

namespace {

void check_alignment(int n, int n_t) {
  if (n_t % (2 * (n - 1)) != 0) {
    throw std::invalid_argument("n_t = " + std::to_string(n_t) + " must be divisible by 2(n - 1) = " +
                                std::to_string(2 * (n - 1)) + " so half-integer t are panel edges");
  }
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  return distance(a, b, Space::sup());
}

// Builds the iRB operator while pinning its grid to f's grid bit for bit.
GridFunction apply_embedded(OperatorSpec spec, const GridFunction& f) {
  IrbOperator op(std::move(spec));
  const GridFunction out = op.apply(GridFunction(op.spec().grid_lo(), op.spec().grid_hi(),
                                                 std::vector<double>(f.values().begin(), f.values().end())));
  return GridFunction(f.lo(), f.hi(), std::vector<double>(out.values().begin(), out.values().end()));
}

double sampled_abs_sup(const FunctionFamily& g, const GridFunction& grid, int n_t) {
  std::vector<double> ts;
  for (int i = 1; i <= g.n(); ++i) ts.push_back(i);
  for (int j = 0; j < n_t; ++j) ts.push_back(midpoint_node(j, g.n(), n_t));
  double best = 0.0;
  for (double t : ts) {
    for (std::size_t i = 0; i < grid.size(); ++i) best = std::max(best, std::fabs(g(t, grid.x(i))));
  }
  return best;
}

}  // namespace

double embed_rb_check(const BaseTriple& base, Interval domain, const GridFunction& f, int n_t) {
  base.validate();
  check_alignment(base.n(), n_t);
  const OperatorSpec spec = embedded_spec(base, Homotopy::step(0.5), domain, f.lo(),
                                          static_cast<int>(f.size()), n_t);
  const GridFunction irb = apply_embedded(spec, f);
  const GridFunction rb = apply_rb(base, domain, f);
  return sup_distance(irb, rb);
}

ApproxStudy approx_rb_study(const BaseTriple& base, Interval domain, std::span<const int> ks,
                            const GridFunction& f, int n_t) {
  base.validate();
  check_alignment(base.n(), n_t);
  if (ks.empty()) throw std::invalid_argument("approx_rb_study needs at least one k");
  for (int k : ks) {
    if (k < 2) throw std::invalid_argument("ramp homotopy needs k >= 2");
  }

  ApproxStudy study;
  study.ks.assign(ks.begin(), ks.end());
  const RbOperator rb(base, domain, f.lo(), f.size());
  const GridFunction rb_f = rb.apply(f);
  const double f_sup = sup_norm(f);
  const int n = base.n();

  int k_max = ks.front();
  for (int k : ks) {
    k_max = std::max(k_max, k);
    const OperatorSpec spec = embedded_spec(base, Homotopy::ramp(k), domain, f.lo(),
                                            static_cast<int>(f.size()), n_t);
    const InjectivityProfile prof = injectivity_profile(spec.fam, n_t);
    if (prof.non_injective_measure >= 0.05) {
      study.warnings.push_back("ramp(" + std::to_string(k) + ") extension is non-injective on a t-set of measure " +
                               std::to_string(prof.non_injective_measure));
    }
    const double c_q = sampled_abs_sup(spec.q, f, n_t);
    const double c_s = sampled_abs_sup(spec.s, f, n_t);
    study.c_q = std::max(study.c_q, c_q);
    study.c_s = std::max(study.c_s, c_s);
    study.error.push_back(sup_distance(apply_embedded(spec, f), rb_f));
    study.bound.push_back(2.0 * (n - 1) * (c_q + c_s * f_sup) / k);
  }

  // Least-squares slope on log-log axes over the positive errors.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < study.ks.size(); ++i) {
    if (!(study.error[i] > 0.0)) continue;
    const double lx = std::log(static_cast<double>(study.ks[i]));
    const double ly = std::log(study.error[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2 && (m * sxx - sx * sx) > 0.0) study.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  // Same maps with q = 0, s = 1 and no doubling; step against ramp(k_max).
  BaseTriple probe;
  probe.l = base.l;
  probe.q.assign(base.l.size(), expr::Expr::constant(0.0));
  probe.s.assign(base.l.size(), expr::Expr::constant(1.0));
  std::vector<double> spike(f.size(), static_cast<double>(k_max));
  spike.back() = 0.0;
  const GridFunction g(f.lo(), f.hi(), std::move(spike));
  const auto n_x = static_cast<int>(f.size());
  const OperatorSpec step = embedded_spec(probe, Homotopy::step(0.5), domain, f.lo(), n_x, n_t, false);
  const OperatorSpec ramp = embedded_spec(probe, Homotopy::ramp(k_max), domain, f.lo(), n_x, n_t, false);
  study.nonuniform_probe = sup_distance(apply_embedded(step, g), apply_embedded(ramp, g));
  return study;
}

}  // namespace irb
