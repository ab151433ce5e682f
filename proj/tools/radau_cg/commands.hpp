#pragma once

// The radau-cg subcommands. Each returns a process exit code and writes
// progress lines to `log`; failures are reported by exceptions.

#include <iosfwd>

#include "config.hpp"

namespace radau::cli {

/// reference_T.jacobi, distribution.txt, problem.jacobi, problem.mtx, model.meta
int cmd_model(const ExperimentConfig& config, std::ostream& log);

/// trace.csv, bounds.csv, acceptance_<label>.csv, status.csv, solve.meta and,
/// in oracle mode, ritz.csv
int cmd_solve(const ExperimentConfig& config, std::ostream& log);

/// Reads solve outputs from the output directory and writes
/// analysis_<label>.csv, terms_<label>.csv, alpha.csv, markers.csv, delay.csv
int cmd_analyze(const ExperimentConfig& config, std::ostream& log);

/// problem.mtx, rhs.txt, ingest.meta and problem.conf (a config for solve)
int cmd_ingest(const ExperimentConfig& config, std::ostream& log);

/// Invariant checks on built-in small cases; returns the number of failures.
int cmd_selftest(std::ostream& log);

}  // namespace radau::cli
