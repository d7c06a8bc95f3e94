// irb: certify, solve and compare integral RB operators from scenario files.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irb/certify.hpp"
#include "irb/runner.hpp"
#include "irb/scenario.hpp"

namespace {

irb::Scenario load(const std::string& what) {
  if (std::filesystem::is_regular_file(what)) return irb::load_config(what);
  try {
    return irb::builtin_scenario(what);
  } catch (const irb::ScenarioNotFound&) {
    throw std::runtime_error("'" + what + "' is neither a readable config file nor a builtin scenario");
  }
}

void print_certificate(const irb::Certificate& c) {
  std::printf("certificate  %s (%s)\n", irb::to_string(c.kind).c_str(), irb::to_string(c.method).c_str());
  std::printf("  S          %.17g\n", c.S);
  if (c.kind == irb::Certificate::Kind::bounded) {
    std::printf("  M          %.17g  (resolution %.3g)\n", c.M, c.M_resolution);
    std::printf("  S*M        %.17g\n", c.criterion);
  } else {
    std::printf("  L          %.17g\n", c.L);
    std::printf("  (n-1)S L^(1/%g)  %.17g\n", c.p, c.criterion);
  }
  if (c.non_injective_probes > 0) std::printf("  non-injective t-probes  %d\n", c.non_injective_probes);
  std::printf("  %s\n", c.pass ? "PASS (contraction)" : "FAIL (criterion >= 1)");
}

int cmd_run(const std::string& target, const irb::RunOptions& opts) {
  const irb::Scenario sc = load(target);
  const irb::RunResult res = irb::run(sc, opts);
  if (!res.error.empty()) {
    std::fprintf(stderr, "error: %s\n", res.error.c_str());
    return res.exit_code;
  }
  print_certificate(*res.certificate);
  const auto& rep = *res.report;
  std::printf("iterations   %d (%s)\n", rep.iterations, rep.converged ? "converged" : "not converged");
  if (!rep.residuals.empty()) std::printf("last residual  %.6e\n", rep.residuals.back());
  if (!rep.bounds.empty()) std::printf("a-posteriori bound  %.6e\n", rep.bounds.back());
  for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
  for (const auto& p : res.written) std::printf("wrote %s\n", p.c_str());
  return res.exit_code;
}

int cmd_certify(const std::string& target, const irb::RunOptions& opts) {
  const irb::Scenario sc = irb::with_overrides(load(target), opts);
  const irb::OperatorSpec spec = sc.operator_spec();
  const irb::Certificate c = irb::certify_scenario(sc, spec);
  print_certificate(c);
  const auto prof = irb::injectivity_profile(spec.fam, sc.n_t);
  std::printf("non-injective t-measure  %.6g\n", prof.non_injective_measure);
  return c.pass ? irb::kExitOk : irb::kExitCertFail;
}

irb::GridFunction random_function(std::mt19937& rng, double lo, double hi, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return irb::GridFunction(lo, hi, std::move(v));
}

int cmd_embed(const std::string& target, const irb::RunOptions& opts) {
  const irb::Scenario sc = irb::with_overrides(load(target), opts);
  const irb::BaseTriple base = sc.base_triple();
  std::mt19937 rng(12345);
  double worst = 0.0;
  const irb::GridFunction f0 = sc.initial();
  worst = irb::embed_rb_check(base, sc.domain(), f0, sc.n_t);
  std::printf("f0            %.3e\n", worst);
  for (int i = 0; i < 10; ++i) {
    const double d = irb::embed_rb_check(base, sc.domain(), random_function(rng, f0.lo(), f0.hi(), f0.size()), sc.n_t);
    std::printf("random f %-4d %.3e\n", i, d);
    worst = std::max(worst, d);
  }
  std::printf("max discrepancy  %.3e\n", worst);
  return irb::kExitOk;
}

int cmd_approx(const std::string& target, const std::vector<int>& ks, const irb::RunOptions& opts) {
  const irb::Scenario sc = irb::with_overrides(load(target), opts);
  const irb::ApproxStudy st = irb::approx_rb_study(sc.base_triple(), sc.domain(), ks, sc.initial(), sc.n_t);
  std::printf("%6s  %-12s  %-12s\n", "k", "e_k", "bound");
  for (std::size_t i = 0; i < st.ks.size(); ++i) {
    std::printf("%6d  %-12.6e  %-12.6e\n", st.ks[i], st.error[i], st.bound[i]);
  }
  std::printf("C_q = %.6g, C_s = %.6g, log-log slope = %.4f\n", st.c_q, st.c_s, st.slope);
  std::printf("non-uniformity probe  %.6g\n", st.nonuniform_probe);
  for (const auto& w : st.warnings) std::printf("warning: %s\n", w.c_str());
  return irb::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral Read-Bajraktarevic operators: certify contraction and iterate to the fixed point"};
  app.require_subcommand(1);

  irb::RunOptions opts;
  int nt = 0;
  int nx = 0;
  double tol = 0.0;
  const auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--nt", nt, "number of t quadrature nodes");
    sub->add_option("--nx", nx, "number of x grid points");
    sub->add_option("--tol", tol, "residual tolerance");
  };

  std::string target;
  auto* run = app.add_subcommand("run", "certify, iterate and export a scenario");
  run->add_option("scenario", target, "config file or builtin scenario name")->required();
  run->add_option("--out-dir", opts.out_dir, "directory for CSV/SVG/JSON output");
  add_overrides(run);

  auto* certify = app.add_subcommand("certify", "print the contraction certificate");
  certify->add_option("scenario", target, "config file or builtin scenario name")->required();
  add_overrides(certify);

  auto* embed = app.add_subcommand("embed-rb", "compare the RB operator with its step-homotopy embedding");
  embed->add_option("scenario", target, "config file or builtin scenario name")->required();
  add_overrides(embed);

  std::vector<int> ks{4, 8, 16, 32};
  auto* approx = app.add_subcommand("approx-rb", "approximate the RB operator by ramp homotopies");
  approx->add_option("scenario", target, "config file or builtin scenario name")->required();
  approx->add_option("--k", ks, "comma separated ramp parameters")->delimiter(',');
  add_overrides(approx);

  auto* scenario = app.add_subcommand("scenario", "builtin scenarios");
  scenario->require_subcommand(1);
  auto* list = scenario->add_subcommand("list", "list builtin scenarios");
  std::string dump_name;
  auto* dump = scenario->add_subcommand("dump", "print a builtin scenario as a config file");
  dump->add_option("name", dump_name)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : {run, certify, embed, approx}) {
      if (sub->count("--nt")) opts.n_t = nt;
      if (sub->count("--nx")) opts.n_x = nx;
      if (sub->count("--tol")) opts.tol = tol;
    }
    if (*run) return cmd_run(target, opts);
    if (*certify) return cmd_certify(target, opts);
    if (*embed) return cmd_embed(target, opts);
    if (*approx) return cmd_approx(target, ks, opts);
    if (*list) {
      for (const auto& b : irb::builtin_scenarios()) std::printf("%-18s %s\n", b.name.c_str(), b.summary.c_str());
      return irb::kExitOk;
    }
    if (*dump) {
      std::cout << irb::write_config(irb::builtin_scenario(dump_name));
      return irb::kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return irb::kExitError;
  }
  return irb::kExitError;
}
