#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lab/config.hpp"

namespace multavg::lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCostGuard = 3;
inline constexpr int kExitNumeric = 4;

/// Version of the per-kind column layouts documented in docs/csv.md.
inline constexpr int kSchemaVersion = 1;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    /// Extra `#` header lines (warnings, fitted parameters).
    std::vector<std::string> notes;
};

/// Runs one experiment in process. Library exceptions propagate.
Table run_experiment(const ExperimentConfig& config);

/// CSV with a `#` header: kind, schema, version, config hash, notes and,
/// last, the wall time (the only line that varies between identical runs).
void write_table(std::ostream& out, const ExperimentConfig& config, const Table& table, double wall_seconds);

/// Runs and writes to config.output (or `out` when empty). Diagnostics go
/// to `err`; the result is the process exit code.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::ostream& err);

} // namespace multavg::lab
