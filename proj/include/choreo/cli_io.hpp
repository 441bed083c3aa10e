#pragma once

// Result documents, plots and batch runs behind the `choreo` command line.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "choreo/optimizer.hpp"
#include "choreo/verify.hpp"

namespace choreo::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Serializes with sorted keys, two-space indentation and every floating
/// point number printed with 17 significant digits. Non-finite values become null.
std::string dump_json(const nlohmann::json& doc);

/// Worker count from CHOREO_THREADS, default the number of logical cores.
int threads_from_env();

nlohmann::json census_json(int n_bodies, bool list, bool hn_only);

nlohmann::json config_to_json(const SolveConfig& cfg);
SolveConfig config_from_json(const nlohmann::json& doc);
nlohmann::json report_to_json(const VerificationReport& report);

VerifyOptions verify_options(const SolveConfig& cfg);

struct SolveRequest {
  SolveConfig config;
  std::optional<int> refine_to;
  int threads = 1;
};

struct SolveOutcome {
  nlohmann::json document;
  int exit_code = kFailure;
};

/// Multistart, optional refinement, verification. Exit code is kSuccess iff
/// the best run converged and passed verification.
SolveOutcome run_solve(const SolveRequest& request);

/// `t,body,x,y` rows over one full period.
std::string trajectory_csv(const FundamentalPath& path);

/// Re-verifies a result document, optionally after refining to `m_check`
/// samples per unit and comparing the crossing structure.
SolveOutcome run_verify(const nlohmann::json& result, std::optional<int> m_check);

/// Closed curve of z_0, the real axis, body positions at t = 0 and the sign
/// vector. Throws std::invalid_argument on a malformed document.
std::string emit_plot(const nlohmann::json& result);

inline constexpr int kSweepMaxBodies = 8;

struct SweepRequest {
  SolveConfig base;  // omega is replaced per class
  bool hn_only = false;
  std::filesystem::path out_dir;
  int threads = 1;
};

/// Solves the canonical representative of each class and writes one result
/// file per class plus an index sorted by action. Returns the index.
SolveOutcome run_sweep(const SweepRequest& request);

}  // namespace choreo::cli
