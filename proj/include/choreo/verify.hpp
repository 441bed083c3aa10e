#pragma once

// A-posteriori checks that a candidate loop behaves like a collision-free
// periodic solution of the N-body equations.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "choreo/census.hpp"
#include "choreo/constraints.hpp"
#include "choreo/loop_model.hpp"

namespace choreo {

/// A run of zero samples whose crossing structure cannot be resolved.
class PlateauError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Max over nodes and bodies of |second difference - grad U| / max(1, |grad U|).
double el_residual(const FullLoop& loop, double alpha = 1.0);

struct MonotoneMargins {
  double monotone_margin = 0.0;  // min x0(t_{k+1}) - x0(t_k)
  double velocity_margin = 0.0;  // min centered x0' over interior nodes of (0, N/2)
  double endpoint_velocity_start = 0.0;  // |x0'(0)|, second-order one-sided
  double endpoint_velocity_end = 0.0;    // |x0'(N/2)|
};
MonotoneMargins strict_monotone_and_velocity(const FundamentalPath& path);

/// w_j = sign(y0(j/2)); throws std::domain_error on a zero.
SignVector sign_pattern(const FundamentalPath& path);

/// Sign changes of samples taken on an open interval. A single zero sample
/// between opposite signs is one crossing; between equal signs it is a
/// tangential touch and not counted. Two or more consecutive zeros throw.
int count_transversal_crossings(std::span<const double> samples);

/// Crossings of Im z_j with the real axis for t in [0, 1/2), per body. A zero
/// at t = 0 counts when the neighbouring samples at -h and +h have opposite signs.
std::vector<int> body_crossing_counts(const FundamentalPath& path);

/// Half the number of real-axis crossings of z_0 over one period.
int bubble_count(const FundamentalPath& path);

struct HnIdentityErrors {
  double relation = 0.0;  // |z0(t + N/2) + z0(t)| (N even), |z0(t + N/2) + conj z0(t)| (N odd)
  std::optional<double> parallelogram;  // N = 4: max(|z2 + z0|, |z3 + z1|)
};
HnIdentityErrors hn_identities(const FullLoop& loop);

/// Integrates the N-body equations for one period from the loop's state at
/// t = 0 and returns the largest position deviation from the samples at the
/// grid times. The default initial velocities are centered differences.
double integrate_return(const FullLoop& loop, double alpha = 1.0, double tolerance = 1e-10);
double integrate_return(const FullLoop& loop, std::span<const Point> initial_velocity, double alpha = 1.0,
                        double tolerance = 1e-10);

/// Least-squares slope of log(rho) against log(dt).
double fit_power_law(std::span<const double> dt, std::span<const double> rho);

/// Finds the closest approach of any pair inside [t_begin, t_end] and fits
/// separation ~ |t - t_c|^p around it. Throws std::domain_error when the
/// closest approach is not below `threshold`.
double sundman_diagnostic(const FullLoop& loop, double t_begin, double t_end, double threshold);

/// Standard deviation over mean of body distances to the instantaneous centroid.
double radii_dispersion(const FullLoop& loop);

struct VerifyThresholds {
  double el_residual = 1e-3;
  double endpoint_velocity = 1e-2;
  double return_error = 5e-2;
  double hn_identity = 1e-10;
  double collision_floor = 1e-6;
};

struct VerifyOptions {
  double alpha = 1.0;
  std::optional<SignVector> expected_omega;
  SymmetryMode symmetry_mode = SymmetryMode::DN;
  double integration_tolerance = 1e-10;
  VerifyThresholds thresholds;
};

struct VerificationReport {
  double el_residual_max = 0.0;
  double min_separation = 0.0;
  MonotoneMargins margins;
  std::optional<SignVector> sign_pattern;
  std::vector<int> crossing_counts;
  std::optional<int> bubble_count;
  std::optional<HnIdentityErrors> hn_errors;
  std::optional<double> return_error;
  double radii_dispersion = 0.0;
  bool passed = false;
  std::vector<std::string> failures;
};

VerificationReport verify(const FundamentalPath& path, const VerifyOptions& options = {});

}  // namespace choreo
