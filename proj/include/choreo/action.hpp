#pragma once

// Discretized Lagrangian action over one full period [0, N):
//   kinetic   = sum_j sum_k |z_j(t_{k+1}) - z_j(t_k)|^2 / (2h)
//   potential = h sum_k sum_{i<j} (|z_i(t_k) - z_j(t_k)|^2 + eps^2)^(-alpha/2)
// Velocities are the centered differences at cell midpoints, the potential
// uses the periodic trapezoid rule, so the stationarity condition is the
// three-point stencil (z_{k+1} - 2 z_k + z_{k-1}) / h^2 = grad U.

#include <optional>
#include <stdexcept>

#include "choreo/loop_model.hpp"

namespace choreo {

struct PotentialConfig {
  double alpha = 1.0;
  double softening = 0.0;
  /// Off leaves only the kinetic term; used to test the descent machinery.
  bool enabled = true;

  void validate() const;
};

struct ActionBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

/// Two bodies share a grid node while the potential is unsoftened.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ActionBreakdown action(const FundamentalPath& path, const PotentialConfig& cfg = {});

/// Like action(), but a collision at a node yields nullopt instead of throwing.
std::optional<ActionBreakdown> try_action(const FundamentalPath& path, const PotentialConfig& cfg = {});

/// Exact gradient of action() with respect to to_dofs(path).
DofVector gradient(const FundamentalPath& path, const PotentialConfig& cfg = {});

struct ActionAndGradient {
  ActionBreakdown value;
  DofVector gradient;
};
std::optional<ActionAndGradient> try_action_and_gradient(const FundamentalPath& path, const PotentialConfig& cfg);

/// Direct evaluation on an arbitrary loop, body by body and pair by pair.
ActionBreakdown loop_action(const FullLoop& loop, const PotentialConfig& cfg = {});

/// Action of all bodies over t in [0, 1/2] only; equals action()/(2N) on
/// D_N-symmetric loops.
ActionBreakdown fundamental_domain_action(const FundamentalPath& path, const PotentialConfig& cfg = {});

/// Smallest pairwise distance over all nodes of the full loop.
double min_separation(const FundamentalPath& path);

/// Discrete form of the coercivity estimate A >= |z|^2_{H1} / (2 (N^2 + 1)),
/// with the H1 norm taken of the piecewise-linear interpolant of the samples.
struct CoercivityResult {
  double action_total = 0.0;
  double h1_norm_sq = 0.0;
  double bound = 0.0;
  bool holds = false;
};
CoercivityResult coercivity_check(const FundamentalPath& path);

}  // namespace choreo
