#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "choreo/constraints.hpp"
#include "choreo/loop_model.hpp"

namespace test_support {

using choreo::FundamentalPath;
using choreo::SignVector;

inline SignVector random_omega(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << (n - 1)) - 1);
  return SignVector::from_mask(n, bits(rng));
}

/// Strictly increasing centered x0 and a smooth y0 obeying the signs of omega
/// with slack at least 0.05.
inline FundamentalPath random_feasible_path(const SignVector& omega, int m, std::mt19937_64& rng) {
  const int n = omega.n_bodies();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FundamentalPath p = FundamentalPath::zeros(n, m);
  const int last = p.last_node();
  double x = 0.0;
  for (int k = 0; k <= last; ++k) {
    p.x0[k] = x;
    x += (0.2 + u(rng)) / m;
  }
  p = choreo::recenter(p);
  double c[4];
  for (double& ci : c) ci = u(rng) - 0.5;
  for (int k = 1; k < last; ++k) {
    double y = 0.0;
    for (int mode = 0; mode < 4; ++mode) y += c[mode] * std::sin(std::numbers::pi * (mode + 1) * k / last);
    p.y0[k] = y + 0.02 * (u(rng) - 0.5);
  }
  for (int j = 1; j < n; ++j) {
    double& y = p.y0[p.half_integer_node(j)];
    y = omega.sign(j) * (std::abs(y) + 0.05);
  }
  return p;
}

/// Unconstrained random path (valid representation only).
inline FundamentalPath random_path(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  FundamentalPath p = FundamentalPath::zeros(n, m);
  for (auto& v : p.x0) v = g(rng);
  for (std::size_t k = 1; k + 1 < p.y0.size(); ++k) p.y0[k] = g(rng);
  return p;
}

inline double max_loop_difference(const choreo::FullLoop& a, const choreo::FullLoop& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.bodies.size(); ++j) {
    for (std::size_t k = 0; k < a.bodies[j].size(); ++k) d = std::max(d, std::abs(a.bodies[j][k] - b.bodies[j][k]));
  }
  return d;
}

}  // namespace test_support
