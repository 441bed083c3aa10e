#pragma once

// Annealed projected-gradient minimization of the action over the discretized
// feasible set, with multistart over seeds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/constraints.hpp"

namespace choreo {

struct SolveConfig {
  SignVector omega;
  SymmetryMode symmetry_mode = SymmetryMode::DN;
  int samples_per_unit = kDefaultSamplesPerUnit;
  double alpha = 1.0;
  /// Strictly decreasing, ending in 0.
  std::vector<double> softening_schedule{1e-1, 1e-2, 1e-3, 0.0};
  double initial_step = 1.0;
  double armijo_c1 = 1e-4;
  double backtrack_ratio = 0.5;
  /// Stop a stage once the projected-gradient norm is below tolerance_scale * sqrt(#dofs).
  double tolerance_scale = 1e-6;
  int max_iterations = 5000;
  int seed_count = 3;
  /// Seed amplitudes of y0 at the half-integers, in units of the N-gon radius.
  std::vector<double> seed_amplitudes{0.5, 0.8, 1.1};
  std::uint64_t random_seed = 0;
  bool potential_enabled = true;
  /// Keeps x0(0) and x0(N/2) fixed; only meaningful for tests of the descent.
  bool pin_x_endpoints = false;
  /// Unsoftened iterates closer than this are rejected; a result this close fails.
  double collision_floor = 1e-6;

  int n_bodies() const { return omega.n_bodies(); }
  double tolerance() const;
  ConstraintConfig constraints() const;
  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, Stalled, Collision, Degenerate, NonFinite };

std::string to_string(SolveStatus status);

struct StageSummary {
  double softening = 0.0;
  int iterations = 0;
  double initial_action = 0.0;
  double final_action = 0.0;
  double projected_gradient_norm = 0.0;
  bool converged = false;
  /// 0 is the start path, c > 0 the result of stage c - 1.
  int entry_point = 0;
  /// Index in SolveResult::trace of this stage's entry value.
  std::size_t trace_offset = 0;
};

struct SolveResult {
  FundamentalPath path;
  ActionBreakdown breakdown;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string failure_reason;
  /// Accepted action values; each stage starts with the value at its entry point.
  std::vector<double> trace;
  std::vector<StageSummary> stages;
  FeasibilityReport feasibility;
  double projected_gradient_norm = 0.0;
  double min_separation = 0.0;
};

/// The composed projection monotone -> topological -> recenter (-> H_N symmetrize).
FundamentalPath project_feasible(const FundamentalPath& path, const SolveConfig& cfg);

/// Throws std::invalid_argument if `start` is not feasible for `cfg`.
SolveResult minimize(const SolveConfig& cfg, const FundamentalPath& start);

/// Seed paths used by multistart, in seed-index order.
std::vector<FundamentalPath> multistart_seeds(const SolveConfig& cfg);

struct MultistartResult {
  std::vector<SolveResult> runs;
  std::optional<std::size_t> best_index;  // least-action converged run

  const SolveResult& best() const;
};

/// Runs minimize from every seed on `threads` workers. Results are identical
/// for any worker count.
MultistartResult multistart(const SolveConfig& cfg, int threads = 1);

/// Resamples to `samples_per_unit` and minimizes with the unsoftened potential.
SolveResult refine(const SolveResult& result, const SolveConfig& cfg, int samples_per_unit);

}  // namespace choreo
