#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irb/certify.hpp"
#include "irb/fixpoint.hpp"
#include "irb/scenario.hpp"

namespace irb {

/// Process exit codes of a run.
enum ExitCode : int {
  kExitOk = 0,             // certificate passed and the iteration converged
  kExitError = 1,          // configuration, evaluation or I/O error
  kExitCertFail = 2,       // certificate failed (the iteration still ran)
  kExitNotConverged = 3,   // certificate passed but k_max was reached
};

int exit_code(bool certificate_pass, bool converged);

struct RunOptions {
  std::optional<int> n_t;
  std::optional<int> n_x;
  std::optional<double> tol;
  /// Relative output paths are resolved against this directory. When a
  /// scenario names no outputs, <out_dir>/<name>.{csv,svg,json} are written.
  std::string out_dir;
};

/// Scenario with the command line overrides applied and re-validated.
Scenario with_overrides(Scenario sc, const RunOptions& opts);

/// certify_bounded for the sup space, certify_lp otherwise, sampled on the
/// scenario's own n_t x n_x resolution.
Certificate certify_scenario(const Scenario& sc, const OperatorSpec& spec);

struct RunResult {
  int exit_code = kExitError;
  std::optional<Certificate> certificate;
  std::optional<IterationReport> report;
  std::vector<std::string> written;
  std::string error;
};

/// Certify, solve, export. Never throws; failures land in `error` with exit
/// code kExitError.
RunResult run(const Scenario& sc, const RunOptions& opts = {});

}  // namespace irb
