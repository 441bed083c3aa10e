#include "choreo/action.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "choreo/symmetry.hpp"

namespace choreo {

namespace {

// Pair potential phi = (r^2 + eps^2)^(-alpha/2) and dphi/d(r^2) * 2, so that
// the gradient with respect to the separation vector u is `slope * u`.
struct PairTerm {
  double value;
  double slope;
};

inline PairTerm pair_term(double r2, double alpha) {
  if (alpha == 1.0) {
    const double inv = 1.0 / std::sqrt(r2);
    return {inv, -inv * inv * inv};
  }
  const double value = std::pow(r2, -0.5 * alpha);
  return {value, -alpha * value / r2};
}

struct Evaluation {
  ActionBreakdown value;
  std::vector<Point> grad;  // with respect to z_0 at the N*M full-loop nodes
  bool collided = false;
};

Evaluation evaluate(const FundamentalPath& path, const PotentialConfig& cfg, bool with_gradient) {
  const std::vector<Point> z = z0_samples(path);
  const int n = path.n_bodies;
  const int m = path.samples_per_unit;
  const int nodes = static_cast<int>(z.size());
  const double h = path.step();
  const double eps2 = cfg.softening * cfg.softening;

  Evaluation out;
  if (with_gradient) out.grad.assign(z.size(), Point{});

  double kinetic = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Point dz = z[static_cast<std::size_t>((k + 1) % nodes)] - z[static_cast<std::size_t>(k)];
    kinetic += std::norm(dz);
  }
  kinetic *= n / (2.0 * h);
  if (with_gradient) {
    const double c = n / h;
    for (int k = 0; k < nodes; ++k) {
      const Point prev = z[static_cast<std::size_t>((k + nodes - 1) % nodes)];
      const Point next = z[static_cast<std::size_t>((k + 1) % nodes)];
      out.grad[static_cast<std::size_t>(k)] = c * (2.0 * z[static_cast<std::size_t>(k)] - prev - next);
    }
  }

  double potential = 0.0;
  if (cfg.enabled) {
    // Pairs (i, i+d) share the same time integral, so the sum over all pairs
    // is sum_d (N - d) * S_d with S_d the integral for the pair (0, d).
    for (int d = 1; d < n; ++d) {
      const double weight = h * (n - d);
      const int offset = d * m;
      double sum = 0.0;
      for (int k = 0; k < nodes; ++k) {
        const auto a = static_cast<std::size_t>(k);
        const auto b = static_cast<std::size_t>((k + offset) % nodes);
        const Point u = z[a] - z[b];
        const double r2 = std::norm(u) + eps2;
        if (r2 == 0.0) {
          out.collided = true;
          return out;
        }
        const PairTerm term = pair_term(r2, cfg.alpha);
        sum += term.value;
        if (with_gradient) {
          const Point g = (weight * term.slope) * u;
          out.grad[a] += g;
          out.grad[b] -= g;
        }
      }
      potential += weight * sum;
    }
  }
  out.value = {kinetic, potential, kinetic + potential};
  return out;
}

DofVector pull_back(const FundamentalPath& path, const std::vector<Point>& grad) {
  const int last = path.last_node();
  const int nodes = 2 * last;
  DofVector g(dof_count(path.n_bodies, path.samples_per_unit));
  // x0 enters at nodes k and N*M - k, y0 enters with a sign flip at the mirror.
  for (int k = 0; k <= last; ++k) {
    double gx = grad[static_cast<std::size_t>(k)].real();
    if (k != 0 && k != last) gx += grad[static_cast<std::size_t>(nodes - k)].real();
    g[static_cast<std::size_t>(k)] = gx;
  }
  for (int k = 1; k < last; ++k) {
    g[static_cast<std::size_t>(last + k)] =
        grad[static_cast<std::size_t>(k)].imag() - grad[static_cast<std::size_t>(nodes - k)].imag();
  }
  return g;
}

}  // namespace

void PotentialConfig::validate() const {
  if (!(alpha >= 1.0)) throw std::invalid_argument("potential exponent alpha must be >= 1");
  if (!(softening >= 0.0)) throw std::invalid_argument("softening must be >= 0");
}

std::optional<ActionBreakdown> try_action(const FundamentalPath& path, const PotentialConfig& cfg) {
  path.validate();
  cfg.validate();
  Evaluation e = evaluate(path, cfg, false);
  if (e.collided) return std::nullopt;
  return e.value;
}

ActionBreakdown action(const FundamentalPath& path, const PotentialConfig& cfg) {
  auto value = try_action(path, cfg);
  if (!value) throw CollisionError("bodies coincide at a grid node with unsoftened potential");
  return *value;
}

std::optional<ActionAndGradient> try_action_and_gradient(const FundamentalPath& path, const PotentialConfig& cfg) {
  path.validate();
  cfg.validate();
  Evaluation e = evaluate(path, cfg, true);
  if (e.collided) return std::nullopt;
  return ActionAndGradient{e.value, pull_back(path, e.grad)};
}

DofVector gradient(const FundamentalPath& path, const PotentialConfig& cfg) {
  auto result = try_action_and_gradient(path, cfg);
  if (!result) throw CollisionError("bodies coincide at a grid node with unsoftened potential");
  return std::move(result->gradient);
}

ActionBreakdown loop_action(const FullLoop& loop, const PotentialConfig& cfg) {
  cfg.validate();
  const int nodes = loop.node_count();
  const double h = loop.step();
  const double eps2 = cfg.softening * cfg.softening;
  double kinetic = 0.0;
  for (const auto& body : loop.bodies) {
    for (int k = 0; k < nodes; ++k) {
      kinetic += std::norm(body[static_cast<std::size_t>((k + 1) % nodes)] - body[static_cast<std::size_t>(k)]);
    }
  }
  kinetic /= 2.0 * h;
  double potential = 0.0;
  if (cfg.enabled) {
    for (int k = 0; k < nodes; ++k) {
      for (int i = 0; i < loop.n_bodies; ++i) {
        for (int j = i + 1; j < loop.n_bodies; ++j) {
          const double r2 = std::norm(loop.bodies[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                      loop.bodies[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) +
                            eps2;
          if (r2 == 0.0) throw CollisionError("bodies coincide at node " + std::to_string(k));
          potential += pair_term(r2, cfg.alpha).value;
        }
      }
    }
    potential *= h;
  }
  return {kinetic, potential, kinetic + potential};
}

ActionBreakdown fundamental_domain_action(const FundamentalPath& path, const PotentialConfig& cfg) {
  path.validate();
  cfg.validate();
  const std::vector<Point> z = z0_samples(path);
  const int n = path.n_bodies;
  const int m = path.samples_per_unit;
  const int nodes = static_cast<int>(z.size());
  const double h = path.step();
  const double eps2 = cfg.softening * cfg.softening;
  auto body = [&](int j, int k) { return z[static_cast<std::size_t>((k + j * m) % nodes)]; };

  double kinetic = 0.0;
  double potential = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m / 2; ++k) kinetic += std::norm(body(j, k + 1) - body(j, k));
  }
  kinetic /= 2.0 * h;
  if (cfg.enabled) {
    for (int k = 0; k <= m / 2; ++k) {
      const double w = (k == 0 || k == m / 2) ? 0.5 * h : h;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double r2 = std::norm(body(i, k) - body(j, k)) + eps2;
          if (r2 == 0.0) throw CollisionError("bodies coincide on the fundamental domain");
          potential += w * pair_term(r2, cfg.alpha).value;
        }
      }
    }
  }
  return {kinetic, potential, kinetic + potential};
}

double min_separation(const FundamentalPath& path) {
  const std::vector<Point> z = z0_samples(path);
  const int nodes = static_cast<int>(z.size());
  double best = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= path.n_bodies / 2; ++d) {
    const int offset = d * path.samples_per_unit;
    for (int k = 0; k < nodes; ++k) {
      best = std::min(best, std::abs(z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>((k + offset) % nodes)]));
    }
  }
  return best;
}

CoercivityResult coercivity_check(const FundamentalPath& path) {
  path.validate();
  if (!(path.x0.front() <= 0.0 && path.x0.back() >= 0.0)) {
    throw std::invalid_argument("coercivity estimate needs x0(0) <= 0 <= x0(N/2)");
  }
  CoercivityResult r;
  r.action_total = action(path).total;
  const std::vector<Point> z = z0_samples(path);
  const int nodes = static_cast<int>(z.size());
  const double h = path.step();
  double mass = 0.0;
  double slope = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Point a = z[static_cast<std::size_t>(k)];
    const Point b = z[static_cast<std::size_t>((k + 1) % nodes)];
    mass += h * (std::norm(a) + (a * std::conj(b)).real() + std::norm(b)) / 3.0;
    slope += std::norm(b - a) / h;
  }
  const int n = path.n_bodies;
  r.h1_norm_sq = n * (mass + slope);
  r.bound = r.h1_norm_sq / (2.0 * (n * n + 1.0));
  r.holds = r.action_total >= r.bound;
  return r;
}

}  // namespace choreo
