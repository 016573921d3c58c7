#pragma once
#include "bcsgp/cli/config.hpp"
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bcsgp::cli {

inline constexpr const char *k_version = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_nonconvergence = 2 };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Columns of the energy tables written by trial-energy, sweep and mu-c.
std::vector<std::string> energy_columns();

/// RFC-4180 style CSV with '.' as decimal separator.
std::string to_csv(const Table &t);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path &path, const std::string &content);

struct Outcome {
  int exit_code{exit_ok};
  json result = json::object();
  json error; ///< null on success
  std::vector<std::string> warnings;
  Table table;
};

const std::vector<std::string> &subcommands();

struct CheckResult {
  std::string name;
  bool passed;
  double value;
  double tolerance;
  std::string detail;
};

/// Deterministic identities of the implementation (no Monte Carlo): HS norm,
/// decomposition, admissibility, GP gradient, Fourier unitarity, quartic
/// scaling of the GP energy.
std::vector<CheckResult> identity_checks();

/// Runs one subcommand on a resolved config. Errors are caught and mapped to
/// exit codes; whatever was computed before the error stays in `result`.
Outcome run_subcommand(const std::string &name, const json &cfg, std::ostream &log);

/// Self-contained report: resolved config, version, seeds and the outcome.
json make_report(const std::string &name, const json &cfg, const Outcome &out);

/// run_subcommand plus report and CSV emission into `out_dir`.
int run(const std::string &name, const json &cfg, const std::filesystem::path &out_dir,
        std::ostream &log);

} // namespace bcsgp::cli
