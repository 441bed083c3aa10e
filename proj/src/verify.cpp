#include "choreo/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "choreo/action.hpp"
#include "choreo/symmetry.hpp"

namespace choreo {

namespace {

std::size_t wrap(long k, long n) { return static_cast<std::size_t>(((k % n) + n) % n); }

// grad_j U_alpha = sum_{k != j} -alpha (z_j - z_k) / |z_j - z_k|^(alpha + 2)
Point gravity(const FullLoop& loop, std::size_t body, std::size_t node, double alpha) {
  Point force{};
  const Point zj = loop.bodies[body][node];
  for (std::size_t i = 0; i < loop.bodies.size(); ++i) {
    if (i == body) continue;
    const Point u = zj - loop.bodies[i][node];
    const double r2 = std::norm(u);
    if (r2 == 0.0) throw CollisionError("collision at a grid node");
    force -= (alpha * std::pow(r2, -0.5 * (alpha + 2.0))) * u;
  }
  return force;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double el_residual(const FullLoop& loop, double alpha) {
  const long nodes = loop.node_count();
  const double inv_h2 = 1.0 / (loop.step() * loop.step());
  double worst = 0.0;
  for (std::size_t j = 0; j < loop.bodies.size(); ++j) {
    const auto& b = loop.bodies[j];
    for (long k = 0; k < nodes; ++k) {
      const Point accel = (b[wrap(k + 1, nodes)] - 2.0 * b[wrap(k, nodes)] + b[wrap(k - 1, nodes)]) * inv_h2;
      const Point force = gravity(loop, j, wrap(k, nodes), alpha);
      worst = std::max(worst, std::abs(accel - force) / std::max(1.0, std::abs(force)));
    }
  }
  return worst;
}

MonotoneMargins strict_monotone_and_velocity(const FundamentalPath& path) {
  const auto& x = path.x0;
  const std::size_t last = x.size() - 1;
  const double h = path.step();
  MonotoneMargins m;
  m.monotone_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < last; ++k) m.monotone_margin = std::min(m.monotone_margin, x[k + 1] - x[k]);
  m.velocity_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < last; ++k) m.velocity_margin = std::min(m.velocity_margin, (x[k + 1] - x[k - 1]) / (2 * h));
  m.endpoint_velocity_start = std::abs(-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2 * h);
  m.endpoint_velocity_end = std::abs(3.0 * x[last] - 4.0 * x[last - 1] + x[last - 2]) / (2 * h);
  return m;
}

SignVector sign_pattern(const FundamentalPath& path) {
  std::vector<int> signs;
  for (int j = 1; j < path.n_bodies; ++j) {
    const double y = path.y0[static_cast<std::size_t>(path.half_integer_node(j))];
    if (y == 0.0) throw std::domain_error("Im z0(" + std::to_string(j) + "/2) is zero");
    signs.push_back(y > 0.0 ? 1 : -1);
  }
  return SignVector(path.n_bodies, std::move(signs));
}

int count_transversal_crossings(std::span<const double> samples) {
  int crossings = 0;
  int previous = 0;  // sign of the last nonzero sample
  std::size_t zero_run = 0;
  for (double v : samples) {
    const int s = sign_of(v);
    if (s == 0) {
      if (++zero_run >= 2) throw PlateauError("zero plateau in crossing count");
      continue;
    }
    zero_run = 0;
    if (previous != 0 && s != previous) ++crossings;
    previous = s;
  }
  return crossings;
}

std::vector<int> body_crossing_counts(const FundamentalPath& path) {
  const std::vector<Point> z = z0_samples(path);
  const long nodes = static_cast<long>(z.size());
  const long m = path.samples_per_unit;
  std::vector<int> counts;
  for (long j = 0; j < path.n_bodies; ++j) {
    std::vector<double> y;
    if (z[wrap(j * m, nodes)].imag() == 0.0) y.push_back(z[wrap(j * m - 1, nodes)].imag());
    for (long k = 0; k < m / 2; ++k) y.push_back(z[wrap(j * m + k, nodes)].imag());
    counts.push_back(count_transversal_crossings(y));
  }
  return counts;
}

int bubble_count(const FundamentalPath& path) {
  const std::vector<Point> z = z0_samples(path);
  const std::size_t nodes = z.size();
  // Start the cyclic scan at a nonzero sample so every zero has both neighbours.
  std::size_t start = 0;
  while (start < nodes && z[start].imag() == 0.0) ++start;
  if (start == nodes) throw PlateauError("z0 lies on the real axis");
  std::vector<double> y;
  y.reserve(nodes + 1);
  for (std::size_t i = 0; i <= nodes; ++i) y.push_back(z[(start + i) % nodes].imag());
  const int crossings = count_transversal_crossings(y);
  return crossings / 2;
}

HnIdentityErrors hn_identities(const FullLoop& loop) {
  const auto& z0 = loop.bodies.front();
  const std::size_t nodes = z0.size();
  const std::size_t half = nodes / 2;
  const bool even = loop.n_bodies % 2 == 0;
  HnIdentityErrors e;
  for (std::size_t k = 0; k < nodes; ++k) {
    const Point shifted = z0[(k + half) % nodes];
    e.relation = std::max(e.relation, std::abs(shifted + (even ? z0[k] : std::conj(z0[k]))));
  }
  if (loop.n_bodies == 4) {
    double p = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
      p = std::max({p, std::abs(loop.bodies[2][k] + loop.bodies[0][k]), std::abs(loop.bodies[3][k] + loop.bodies[1][k])});
    }
    e.parallelogram = p;
  }
  return e;
}

double integrate_return(const FullLoop& loop, double alpha, double tolerance) {
  const long nodes = loop.node_count();
  std::vector<Point> velocity;
  for (const auto& b : loop.bodies) velocity.push_back((b[1] - b[wrap(-1, nodes)]) / (2.0 * loop.step()));
  return integrate_return(loop, velocity, alpha, tolerance);
}

double integrate_return(const FullLoop& loop, std::span<const Point> initial_velocity, double alpha,
                        double tolerance) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const std::size_t n = loop.bodies.size();
  if (initial_velocity.size() != n) throw std::invalid_argument("one initial velocity per body required");

  // Layout: x_j, y_j for all bodies, then the velocities.
  State state(4 * n);
  for (std::size_t j = 0; j < n; ++j) {
    state[2 * j] = loop.bodies[j][0].real();
    state[2 * j + 1] = loop.bodies[j][0].imag();
    state[2 * n + 2 * j] = initial_velocity[j].real();
    state[2 * n + 2 * j + 1] = initial_velocity[j].imag();
  }
  auto rhs = [n, alpha](const State& s, State& ds, double) {
    for (std::size_t j = 0; j < 2 * n; ++j) {
      ds[j] = s[2 * n + j];
      ds[2 * n + j] = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double dx = s[2 * j] - s[2 * k];
        const double dy = s[2 * j + 1] - s[2 * k + 1];
        const double f = alpha * std::pow(dx * dx + dy * dy, -0.5 * (alpha + 2.0));
        ds[2 * n + 2 * j] -= f * dx;
        ds[2 * n + 2 * j + 1] -= f * dy;
        ds[2 * n + 2 * k] += f * dx;
        ds[2 * n + 2 * k + 1] += f * dy;
      }
    }
  };

  const long nodes = loop.node_count();
  std::vector<double> times(static_cast<std::size_t>(nodes + 1));
  for (long k = 0; k <= nodes; ++k) times[static_cast<std::size_t>(k)] = k * loop.step();

  double worst = 0.0;
  bool blew_up = false;
  auto observe = [&](const State& s, double t) {
    const auto k = static_cast<long>(std::lround(t * loop.samples_per_unit));
    for (std::size_t j = 0; j < n; ++j) {
      const Point expected = loop.bodies[j][wrap(k, nodes)];
      const double dev = std::abs(Point{s[2 * j], s[2 * j + 1]} - expected);
      if (!std::isfinite(dev)) blew_up = true;
      worst = std::max(worst, dev);
    }
  };
  try {
    auto stepper = odeint::make_dense_output(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, state, times.begin(), times.end(), loop.step(), observe);
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("integration failed: ") + e.what());
  }
  if (blew_up) throw IntegrationError("integration produced non-finite positions (near-collision blowup)");
  return worst;
}

double fit_power_law(std::span<const double> dt, std::span<const double> rho) {
  if (dt.size() != rho.size() || dt.size() < 2) throw std::invalid_argument("power-law fit needs >= 2 paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dt.size());
  for (std::size_t i = 0; i < dt.size(); ++i) {
    const double lx = std::log(dt[i]);
    const double ly = std::log(rho[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double sundman_diagnostic(const FullLoop& loop, double t_begin, double t_end, double threshold) {
  const long nodes = loop.node_count();
  const long k0 = static_cast<long>(std::ceil(t_begin * loop.samples_per_unit));
  const long k1 = static_cast<long>(std::floor(t_end * loop.samples_per_unit));
  double best = std::numeric_limits<double>::infinity();
  long best_k = k0;
  std::size_t bi = 0, bj = 1;
  for (long k = k0; k <= k1; ++k) {
    for (std::size_t i = 0; i < loop.bodies.size(); ++i) {
      for (std::size_t j = i + 1; j < loop.bodies.size(); ++j) {
        const double r = std::abs(loop.bodies[i][wrap(k, nodes)] - loop.bodies[j][wrap(k, nodes)]);
        if (r < best) {
          best = r;
          best_k = k;
          bi = i;
          bj = j;
        }
      }
    }
  }
  if (!(best < threshold)) throw std::domain_error("no near-collision below threshold in the window");
  std::vector<double> dt, rho;
  for (long k = k0; k <= k1; ++k) {
    if (k == best_k) continue;
    const double r = std::abs(loop.bodies[bi][wrap(k, nodes)] - loop.bodies[bj][wrap(k, nodes)]);
    if (r <= 0.0) continue;
    dt.push_back(std::abs(k - best_k) * loop.step());
    rho.push_back(r);
  }
  return fit_power_law(dt, rho);
}

double radii_dispersion(const FullLoop& loop) {
  const std::size_t nodes = loop.bodies.front().size();
  const double n = static_cast<double>(loop.bodies.size());
  std::vector<double> radii;
  radii.reserve(loop.bodies.size() * nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    Point centroid{};
    for (const auto& b : loop.bodies) centroid += b[k];
    centroid /= n;
    for (const auto& b : loop.bodies) radii.push_back(std::abs(b[k] - centroid));
  }
  double mean = 0.0;
  for (double r : radii) mean += r;
  mean /= static_cast<double>(radii.size());
  double var = 0.0;
  for (double r : radii) var += (r - mean) * (r - mean);
  var /= static_cast<double>(radii.size());
  return std::sqrt(var) / mean;
}

VerificationReport verify(const FundamentalPath& path, const VerifyOptions& options) {
  path.validate();
  const VerifyThresholds& th = options.thresholds;
  const FullLoop loop = reconstruct(path);
  VerificationReport r;
  auto fail = [&](std::string why) { r.failures.push_back(std::move(why)); };

  r.min_separation = min_separation(path);
  r.margins = strict_monotone_and_velocity(path);
  r.radii_dispersion = radii_dispersion(loop);
  const bool collision_free = r.min_separation > th.collision_floor;
  if (!collision_free) fail("bodies closer than the collision floor");

  if (collision_free) {
    r.el_residual_max = el_residual(loop, options.alpha);
    if (!(r.el_residual_max <= th.el_residual)) fail("Euler-Lagrange residual above threshold");
  } else {
    r.el_residual_max = std::numeric_limits<double>::infinity();
  }

  if (!(r.margins.monotone_margin > 0.0)) fail("x0 not strictly increasing");
  if (!(r.margins.velocity_margin > 0.0)) fail("interior x0 velocity not positive");
  if (!(r.margins.endpoint_velocity_start <= th.endpoint_velocity && r.margins.endpoint_velocity_end <= th.endpoint_velocity)) {
    fail("x0 velocity does not vanish at t = 0 and t = N/2");
  }

  try {
    r.sign_pattern = sign_pattern(path);
    if (options.expected_omega && !(*r.sign_pattern == *options.expected_omega)) {
      fail("recovered sign pattern differs from the requested one");
    }
  } catch (const std::domain_error& e) {
    fail(e.what());
  }

  try {
    r.crossing_counts = body_crossing_counts(path);
    r.bubble_count = bubble_count(path);
  } catch (const PlateauError& e) {
    fail(e.what());
  }

  if (options.symmetry_mode == SymmetryMode::HN) {
    r.hn_errors = hn_identities(loop);
    const double worst = std::max(r.hn_errors->relation, r.hn_errors->parallelogram.value_or(0.0));
    if (!(worst <= th.hn_identity)) fail("H_N identities violated");
  }

  if (collision_free) {
    try {
      r.return_error = integrate_return(loop, options.alpha, options.integration_tolerance);
      if (!(*r.return_error <= th.return_error)) fail("forward integration does not return to the loop");
    } catch (const IntegrationError& e) {
      fail(e.what());
    }
  }

  r.passed = r.failures.empty();
  return r;
}

}  // namespace choreo
