#include "irb/runner.hpp"

#include <filesystem>

#include "irb/export.hpp"

namespace irb {

int exit_code(bool certificate_pass, bool converged) {
  if (!certificate_pass) return kExitCertFail;
  return converged ? kExitOk : kExitNotConverged;
}

Scenario with_overrides(Scenario sc, const RunOptions& opts) {
  if (opts.n_t) sc.n_t = *opts.n_t;
  if (opts.n_x) sc.n_x = *opts.n_x;
  if (opts.tol) sc.tol = *opts.tol;
  sc.validate();
  return sc;
}

Certificate certify_scenario(const Scenario& sc, const OperatorSpec& spec) {
  if (sc.space.kind == Space::Kind::sup) return certify_bounded(spec, sc.n_t, sc.n_x);
  return certify_lp(spec, sc.space.p, sc.n_t, sc.n_x);
}

namespace {

namespace fs = std::filesystem;

std::string resolve(const std::string& configured, const std::string& out_dir, const std::string& fallback) {
  if (configured.empty()) {
    if (out_dir.empty()) return {};
    return (fs::path(out_dir) / fallback).string();
  }
  const fs::path p(configured);
  if (out_dir.empty() || p.is_absolute()) return p.string();
  return (fs::path(out_dir) / p).string();
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& opts) {
  RunResult res;
  try {
    const Scenario sc = with_overrides(scenario, opts);
    const IrbOperator op(sc.operator_spec());
    const Certificate cert = certify_scenario(sc, op.spec());
    res.certificate = cert;

    SolveOptions so;
    so.tol = sc.tol;
    so.k_max = sc.k_max;
    so.space = sc.space;
    if (cert.pass) so.contraction = cert.criterion;
    IterationReport rep = solve(op, sc.initial(), so);
    if (!cert.pass) {
      rep.warnings.insert(rep.warnings.begin(),
                          "certificate failed: criterion " + std::to_string(cert.criterion) + " >= 1");
    }
    if (op.non_injective_nodes() > 0) {
      rep.warnings.push_back("l_t is not injective at " + std::to_string(op.non_injective_nodes()) + " of " +
                             std::to_string(sc.n_t) + " t-nodes; those nodes were skipped");
    }

    const std::string stem = sc.name.empty() ? "scenario" : sc.name;
    const std::string csv = resolve(sc.csv, opts.out_dir, stem + ".csv");
    const std::string svg = resolve(sc.svg, opts.out_dir, stem + ".svg");
    const std::string report = resolve(sc.report, opts.out_dir, stem + ".json");
    if (!opts.out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(opts.out_dir, ec);
      if (ec) throw ExportError(opts.out_dir, "cannot create directory: " + ec.message());
    }
    if (!csv.empty()) {
      export_csv(rep.kept, csv, rep.kept_index);
      res.written.push_back(csv);
    }
    if (!svg.empty()) {
      export_svg(rep.kept, svg, rep.kept_index);
      res.written.push_back(svg);
    }
    if (!report.empty()) {
      export_report(sc, cert, rep, report);
      res.written.push_back(report);
    }
    res.exit_code = exit_code(cert.pass, rep.converged);
    res.report = std::move(rep);
  } catch (const std::exception& e) {
    res.exit_code = kExitError;
    res.error = e.what();
  }
  return res;
}

}  // namespace irb
