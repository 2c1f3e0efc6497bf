#pragma once

// Command implementations behind the qcrit executable. Kept apart from the
// argument parser so tests can drive commands directly.

#include <string>

#include "qcrit/types.hpp"

namespace qcrit::cli {

// Exit codes: 0 success, 1 I/O failure, 2 partial results (some cells
// failed), 64 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string command;
  std::string model = "tfim";
  double omega = 1.0;
  double g = 1.0;                    // qfim: single coupling value
  std::string g_spec = "0.5:1.5:101";   // grid: start:stop[:count] or list
  std::string sigma_spec = "0";         // grid or comma list
  std::string n_spec = "20";            // int list or range
  int quad_nodes = 64;
  int workers = 0;                   // 0 = available parallelism
  double epsilon_rel = 0.01;         // sigma-f departure criterion
  std::string sigma_grid_spec;       // sigma-f grid "lo:hi:per_decade"
  std::string search_spec;           // peak search range "lo:hi[:count]"
  bool check_convergence = true;
  double rank_cutoff = default_tolerances.rank_cutoff;
  std::string out_dir = ".";
  std::string prefix;                // output base name, default: command
  std::string fit_input;
  std::string fit_x;
  std::string fit_y;
  std::string fit_where;  // "column=value" row filter
  std::string rerun_path;
};

// Dispatches on config.command; writes CSV + JSON sidecar into out_dir and
// prints a short summary to stdout. Never throws; failures map to exit codes.
int run_command(const RunConfig& config);

}  // namespace qcrit::cli
