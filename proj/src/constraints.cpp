#include "choreo/constraints.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace choreo {

void ConstraintConfig::validate() const {
  if (topological_margin < 0.0) throw std::invalid_argument("topological margin must be >= 0");
  if (symmetry_mode == SymmetryMode::HN && !hn_admissible(omega)) {
    throw std::invalid_argument("sign vector " + omega.to_string() + " is not admissible for H_N symmetry");
  }
}

TopologicalReport check_topological(const FundamentalPath& path, const SignVector& omega, double margin) {
  if (omega.n_bodies() != path.n_bodies) throw std::invalid_argument("sign vector length does not match N");
  TopologicalReport r;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (int j = 1; j < path.n_bodies; ++j) {
    const double slack = omega.sign(j) * path.y0[static_cast<std::size_t>(path.half_integer_node(j))] - margin;
    if (slack < r.min_slack) {
      r.min_slack = slack;
      r.worst_index = j;
    }
  }
  r.ok = r.min_slack >= 0.0;
  return r;
}

MonotoneReport check_monotone(const FundamentalPath& path, MonotoneMode mode) {
  MonotoneReport r;
  const auto& x = path.x0;
  if (mode == MonotoneMode::Global) {
    for (std::size_t k = 0; k + 1 < x.size(); ++k) r.worst_violation = std::max(r.worst_violation, x[k] - x[k + 1]);
  } else {
    const int half = path.samples_per_unit / 2;
    for (int j = 0; j < path.n_bodies; ++j) {
      const double lo = x[static_cast<std::size_t>(j * half)];
      const double hi = x[static_cast<std::size_t>((j + 1) * half)];
      for (int k = j * half; k <= (j + 1) * half; ++k) {
        const double v = x[static_cast<std::size_t>(k)];
        r.worst_violation = std::max({r.worst_violation, lo - v, v - hi});
      }
    }
  }
  r.ok = r.worst_violation <= 0.0;
  return r;
}

BoundaryReport check_boundary(const FundamentalPath& path) {
  BoundaryReport r;
  r.min_slack = std::min(-path.x0.front(), path.x0.back());
  r.ok = r.min_slack >= 0.0;
  return r;
}

FeasibilityReport feasibility_report(const FundamentalPath& path, const ConstraintConfig& cfg) {
  return FeasibilityReport{check_topological(path, cfg.omega, cfg.topological_margin),
                           check_monotone(path, cfg.monotone_mode), check_boundary(path)};
}

std::vector<double> project_monotone(std::span<const double> values) {
  // Blocks of pooled entries as (sum, count); merging on violation keeps the
  // block means nondecreasing.
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  sums.reserve(values.size());
  counts.reserve(values.size());
  for (double v : values) {
    sums.push_back(v);
    counts.push_back(1);
    while (sums.size() > 1) {
      const std::size_t b = sums.size() - 1;
      const double mean_prev = sums[b - 1] / static_cast<double>(counts[b - 1]);
      const double mean_last = sums[b] / static_cast<double>(counts[b]);
      if (mean_prev <= mean_last) break;
      sums[b - 1] += sums[b];
      counts[b - 1] += counts[b];
      sums.pop_back();
      counts.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t b = 0; b < sums.size(); ++b) {
    if (counts[b] == 1) {
      out.push_back(sums[b]);
    } else {
      out.insert(out.end(), counts[b], sums[b] / static_cast<double>(counts[b]));
    }
  }
  return out;
}

FundamentalPath project_topological(const FundamentalPath& path, const SignVector& omega, double margin) {
  if (omega.n_bodies() != path.n_bodies) throw std::invalid_argument("sign vector length does not match N");
  FundamentalPath out = path;
  for (int j = 1; j < path.n_bodies; ++j) {
    double& y = out.y0[static_cast<std::size_t>(path.half_integer_node(j))];
    const int w = omega.sign(j);
    y = w * std::max(w * y, margin);
  }
  return out;
}

FundamentalPath recenter(const FundamentalPath& path) {
  FundamentalPath out = path;
  const double shift = 0.5 * (path.x0.front() + path.x0.back());
  if (shift != 0.0) {
    for (double& x : out.x0) x -= shift;
  }
  return out;
}

}  // namespace choreo
