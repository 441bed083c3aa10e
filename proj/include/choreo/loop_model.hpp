#pragma once

// Discretized loops. A D_N-symmetric choreography is fixed by the curve z_0 on
// [0, N/2]; the rest of the loop follows from z_0(-t) = conj z_0(t) and
// z_j(t) = z_0(j + t).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "choreo/census.hpp"

namespace choreo {

using Point = std::complex<double>;

inline constexpr int kDefaultSamplesPerUnit = 64;

/// z_0 sampled at t_k = k/M, k = 0..N*M/2.
struct FundamentalPath {
  int n_bodies = 0;
  int samples_per_unit = 0;  // M, even
  std::vector<double> x0;
  std::vector<double> y0;

  static FundamentalPath zeros(int n_bodies, int samples_per_unit);

  /// Index of the node at t = N/2.
  int last_node() const { return n_bodies * samples_per_unit / 2; }
  int node_count() const { return last_node() + 1; }
  double step() const { return 1.0 / samples_per_unit; }
  /// Node index of the half-integer time j/2.
  int half_integer_node(int j) const { return j * samples_per_unit / 2; }
  Point at(int k) const { return {x0[static_cast<std::size_t>(k)], y0[static_cast<std::size_t>(k)]}; }

  /// Throws std::invalid_argument if an invariant is broken.
  void validate() const;

  friend bool operator==(const FundamentalPath&, const FundamentalPath&) = default;
};

/// Per-body samples over one full period, N*M uniform nodes on [0, N).
struct FullLoop {
  int n_bodies = 0;
  int samples_per_unit = 0;
  std::vector<std::vector<Point>> bodies;

  int node_count() const { return n_bodies * samples_per_unit; }
  double step() const { return 1.0 / samples_per_unit; }
};

/// Free coordinates: all x0 entries followed by the interior y0 entries.
using DofVector = std::vector<double>;

std::size_t dof_count(int n_bodies, int samples_per_unit);
DofVector to_dofs(const FundamentalPath& path);
FundamentalPath from_dofs(int n_bodies, int samples_per_unit, std::span<const double> dofs);

/// Initial guess realizing the sign pattern of `omega`: x0 rises as a half
/// cosine from -spread*N/4 to +spread*N/4, y0 is the clamped cubic spline
/// through 0, amplitude*w_1, ..., amplitude*w_{N-1}, 0 at the half-integers.
FundamentalPath seed(const SignVector& omega, double amplitude, double spread,
                     int samples_per_unit = kDefaultSamplesPerUnit);

/// Linear interpolation onto a grid with `samples_per_unit` nodes per unit time.
FundamentalPath resample(const FundamentalPath& path, int samples_per_unit);

/// Radius of the rotating N-gon of period N for the potential sum 1/r^alpha.
double ngon_radius(int n_bodies, double alpha = 1.0);

/// The rotating N-gon sampled on the fundamental grid, z_0(t) = -R exp(-i 2 pi t / N).
FundamentalPath rotating_ngon(int n_bodies, int samples_per_unit, double alpha = 1.0);

nlohmann::json path_to_json(const FundamentalPath& path);
FundamentalPath path_from_json(const nlohmann::json& j);

}  // namespace choreo
