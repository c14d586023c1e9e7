#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace rist {

struct RunOptions {
  std::string out_dir = "runs";
  int workers = 1;
  bool quick = false;  // 100 realizations x 50 symbols, thinned sweeps
};

struct RunSummary {
  std::string command;
  std::string config_digest;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
  std::string oracle_status = "n/a";  // pass | fail | n/a
  bool ok = true;
  std::string error;

  std::string to_json() const;
};

struct OracleResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

// The independent-oracle self checks: arcsine Monte-Carlo consistency,
// closed-form phase optimality vs random search, the M=2 brute-force grid
// solve, exhaustive discrete projection, and the full-search detector rule.
std::vector<OracleResult> run_oracle_suite(const ExperimentConfig& cfg,
                                           bool quick);

RunSummary run_beampattern(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary run_sep(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary run_oracles(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary run_all(const ExperimentConfig& cfg, const RunOptions& opts);

// Fresh timestamped directory <base>/<command>-<UTC stamp>; also writes the
// resolved config snapshot into it.
std::string make_run_dir(const std::string& base, const std::string& command,
                         const ExperimentConfig& cfg);

}  // namespace rist
