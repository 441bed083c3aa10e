#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace choreo::detail {

// Thomas algorithm for a diagonally dominant tridiagonal system. `lower[i]`
// couples row i to i-1 (lower[0] unused), `upper[i]` couples row i to i+1.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw std::invalid_argument("tridiagonal system size mismatch");
  }
  std::vector<double> c(n), d(n), x(n);
  if (n == 0) return x;
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / denom;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace choreo::detail
