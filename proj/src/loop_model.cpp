#include "choreo/loop_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tridiagonal.hpp"

namespace choreo {

namespace {

void require_grid(int n_bodies, int samples_per_unit) {
  if (n_bodies < 3) throw std::invalid_argument("need at least 3 bodies");
  if (samples_per_unit < 2 || samples_per_unit % 2 != 0) {
    throw std::invalid_argument("samples per unit must be even and positive, got " +
                                std::to_string(samples_per_unit));
  }
}

// Values at the half-integer knots 0, 1/2, ..., N/2 and C2 slopes with the
// end slopes clamped to the end secants.
std::vector<double> clamped_spline_slopes(const std::vector<double>& values, double spacing) {
  const std::size_t n = values.size();
  std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
  rhs[0] = (values[1] - values[0]) / spacing;
  rhs[n - 1] = (values[n - 1] - values[n - 2]) / spacing;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    lower[i] = 1.0;
    diag[i] = 4.0;
    upper[i] = 1.0;
    rhs[i] = 3.0 * (values[i + 1] - values[i - 1]) / spacing;
  }
  return detail::solve_tridiagonal(lower, diag, upper, rhs);
}

double hermite(double v0, double v1, double m0, double m1, double spacing, double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * spacing * m0 + (-2 * s3 + 3 * s2) * v1 +
         (s3 - s2) * spacing * m1;
}

}  // namespace

FundamentalPath FundamentalPath::zeros(int n_bodies, int samples_per_unit) {
  require_grid(n_bodies, samples_per_unit);
  FundamentalPath path;
  path.n_bodies = n_bodies;
  path.samples_per_unit = samples_per_unit;
  path.x0.assign(static_cast<std::size_t>(path.node_count()), 0.0);
  path.y0.assign(static_cast<std::size_t>(path.node_count()), 0.0);
  return path;
}

void FundamentalPath::validate() const {
  require_grid(n_bodies, samples_per_unit);
  const auto expected = static_cast<std::size_t>(node_count());
  if (x0.size() != expected || y0.size() != expected) {
    throw std::invalid_argument("fundamental path needs " + std::to_string(expected) + " nodes");
  }
  if (y0.front() != 0.0 || y0.back() != 0.0) {
    throw std::invalid_argument("fundamental path must be real at t = 0 and t = N/2");
  }
  for (std::size_t k = 0; k < expected; ++k) {
    if (!std::isfinite(x0[k]) || !std::isfinite(y0[k])) {
      throw std::invalid_argument("fundamental path has a non-finite sample");
    }
  }
}

std::size_t dof_count(int n_bodies, int samples_per_unit) {
  require_grid(n_bodies, samples_per_unit);
  return static_cast<std::size_t>(n_bodies * samples_per_unit);
}

DofVector to_dofs(const FundamentalPath& path) {
  DofVector dofs(path.x0.begin(), path.x0.end());
  dofs.insert(dofs.end(), path.y0.begin() + 1, path.y0.end() - 1);
  return dofs;
}

FundamentalPath from_dofs(int n_bodies, int samples_per_unit, std::span<const double> dofs) {
  FundamentalPath path = FundamentalPath::zeros(n_bodies, samples_per_unit);
  if (dofs.size() != dof_count(n_bodies, samples_per_unit)) {
    throw std::invalid_argument("dof vector length " + std::to_string(dofs.size()) + " does not match " +
                                std::to_string(dof_count(n_bodies, samples_per_unit)));
  }
  const auto nodes = static_cast<std::size_t>(path.node_count());
  std::copy(dofs.begin(), dofs.begin() + static_cast<std::ptrdiff_t>(nodes), path.x0.begin());
  std::copy(dofs.begin() + static_cast<std::ptrdiff_t>(nodes), dofs.end(), path.y0.begin() + 1);
  return path;
}

FundamentalPath seed(const SignVector& omega, double amplitude, double spread, int samples_per_unit) {
  if (!(amplitude > 0.0) || !(spread > 0.0)) {
    throw std::invalid_argument("seed amplitude and spread must be positive");
  }
  const int n = omega.n_bodies();
  FundamentalPath path = FundamentalPath::zeros(n, samples_per_unit);
  const int last = path.last_node();
  const double half_width = spread * n / 4.0;
  for (int k = 0; k <= last; ++k) {
    path.x0[static_cast<std::size_t>(k)] = -half_width * std::cos(std::numbers::pi * k / last);
  }

  std::vector<double> knots(static_cast<std::size_t>(n + 1), 0.0);
  for (int j = 1; j < n; ++j) knots[static_cast<std::size_t>(j)] = amplitude * omega.sign(j);
  const auto slopes = clamped_spline_slopes(knots, 0.5);
  const int per_knot = samples_per_unit / 2;
  for (int k = 1; k < last; ++k) {
    const int seg = k / per_knot;
    const double s = static_cast<double>(k % per_knot) / per_knot;
    const auto i = static_cast<std::size_t>(seg);
    path.y0[static_cast<std::size_t>(k)] =
        hermite(knots[i], knots[i + 1], slopes[i], slopes[i + 1], 0.5, s);
  }
  for (int j = 1; j < n; ++j) {
    path.y0[static_cast<std::size_t>(path.half_integer_node(j))] = knots[static_cast<std::size_t>(j)];
  }
  return path;
}

FundamentalPath resample(const FundamentalPath& path, int samples_per_unit) {
  path.validate();
  if (samples_per_unit % 2 != 0) throw std::invalid_argument("resample target must be even");
  if (samples_per_unit == path.samples_per_unit) return path;
  FundamentalPath out = FundamentalPath::zeros(path.n_bodies, samples_per_unit);
  const int last = out.last_node();
  for (int k = 0; k <= last; ++k) {
    // Exact rational position k * M_old / M_new on the old grid.
    const long num = static_cast<long>(k) * path.samples_per_unit;
    const long base = num / samples_per_unit;
    const long rem = num % samples_per_unit;
    const auto i = static_cast<std::size_t>(base);
    const auto o = static_cast<std::size_t>(k);
    if (rem == 0) {
      out.x0[o] = path.x0[i];
      out.y0[o] = path.y0[i];
    } else {
      const double w = static_cast<double>(rem) / samples_per_unit;
      out.x0[o] = (1.0 - w) * path.x0[i] + w * path.x0[i + 1];
      out.y0[o] = (1.0 - w) * path.y0[i] + w * path.y0[i + 1];
    }
  }
  out.y0.front() = 0.0;
  out.y0.back() = 0.0;
  return out;
}

double ngon_radius(int n_bodies, double alpha) {
  if (n_bodies < 2) throw std::invalid_argument("need at least 2 bodies");
  const double omega = 2.0 * std::numbers::pi / n_bodies;
  double csc_sum = 0.0;
  for (int k = 1; k < n_bodies; ++k) csc_sum += std::pow(std::sin(std::numbers::pi * k / n_bodies), -alpha);
  // R w^2 = alpha (2R)^-(alpha+1) sum csc^alpha(pi k / N)
  return std::pow(alpha * std::pow(2.0, -(alpha + 1.0)) * csc_sum / (omega * omega), 1.0 / (alpha + 2.0));
}

FundamentalPath rotating_ngon(int n_bodies, int samples_per_unit, double alpha) {
  FundamentalPath path = FundamentalPath::zeros(n_bodies, samples_per_unit);
  const double radius = ngon_radius(n_bodies, alpha);
  const double omega = 2.0 * std::numbers::pi / n_bodies;
  const int last = path.last_node();
  for (int k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) / samples_per_unit;
    path.x0[static_cast<std::size_t>(k)] = -radius * std::cos(omega * t);
    path.y0[static_cast<std::size_t>(k)] = radius * std::sin(omega * t);
  }
  path.x0.back() = radius;
  path.y0.front() = 0.0;
  path.y0.back() = 0.0;
  return path;
}

nlohmann::json path_to_json(const FundamentalPath& path) {
  return nlohmann::json{{"n", path.n_bodies}, {"m", path.samples_per_unit}, {"x0", path.x0}, {"y0", path.y0}};
}

FundamentalPath path_from_json(const nlohmann::json& j) {
  FundamentalPath path;
  path.n_bodies = j.at("n").get<int>();
  path.samples_per_unit = j.at("m").get<int>();
  path.x0 = j.at("x0").get<std::vector<double>>();
  path.y0 = j.at("y0").get<std::vector<double>>();
  path.validate();
  return path;
}

}  // namespace choreo
