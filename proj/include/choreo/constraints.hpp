#pragma once

// Feasible set of the constrained minimization: sign constraints on Im z_0 at
// half-integer times, monotonicity of Re z_0 on [0, N/2], and the boundary
// inequality x0(0) <= 0 <= x0(N/2). The x and y constraints act on disjoint
// coordinates, so projecting on each separately projects on the product.

#include <span>
#include <vector>

#include "choreo/census.hpp"
#include "choreo/loop_model.hpp"

namespace choreo {

enum class SymmetryMode { DN, HN };
enum class MonotoneMode { PerInterval, Global };

struct ConstraintConfig {
  SignVector omega;
  SymmetryMode symmetry_mode = SymmetryMode::DN;
  double topological_margin = 0.0;
  MonotoneMode monotone_mode = MonotoneMode::Global;

  /// Throws std::invalid_argument if HN mode is requested for a non-admissible omega.
  void validate() const;
};

struct TopologicalReport {
  bool ok = true;
  int worst_index = 0;  // j in 1..N-1 with the smallest w_j * y0(j/2) - margin
  double min_slack = 0.0;
};

struct MonotoneReport {
  bool ok = true;
  double worst_violation = 0.0;  // largest amount by which an inequality fails, 0 if none
};

struct BoundaryReport {
  bool ok = true;
  double min_slack = 0.0;  // min(-x0(0), x0(N/2))
};

struct FeasibilityReport {
  TopologicalReport topological;
  MonotoneReport monotone;
  BoundaryReport boundary;

  bool all_ok() const { return topological.ok && monotone.ok && boundary.ok; }
};

/// w_j * y0(j/2) >= margin for j = 1..N-1.
TopologicalReport check_topological(const FundamentalPath& path, const SignVector& omega, double margin = 0.0);

/// PerInterval: x0(j/2) <= x0(j/2 + t) <= x0((j+1)/2) on every half-interval.
/// Global: x0 nondecreasing over all of [0, N/2].
MonotoneReport check_monotone(const FundamentalPath& path, MonotoneMode mode);

BoundaryReport check_boundary(const FundamentalPath& path);

FeasibilityReport feasibility_report(const FundamentalPath& path, const ConstraintConfig& cfg);

/// Euclidean projection onto nondecreasing sequences (pool adjacent violators).
std::vector<double> project_monotone(std::span<const double> values);

/// Clamps y0 at each half-integer node to w_j * max(w_j * y0, margin).
FundamentalPath project_topological(const FundamentalPath& path, const SignVector& omega, double margin = 0.0);

/// Shifts x0 so that x0(0) = -x0(N/2).
FundamentalPath recenter(const FundamentalPath& path);

}  // namespace choreo
