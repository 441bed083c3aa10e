#include "choreo/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "choreo/symmetry.hpp"
#include "tridiagonal.hpp"

namespace choreo {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double max_abs_difference(const FundamentalPath& a, const FundamentalPath& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.x0.size(); ++k) {
    m = std::max({m, std::abs(a.x0[k] - b.x0[k]), std::abs(a.y0[k] - b.y0[k])});
  }
  return m;
}

// Inverse of the kinetic Hessian (plus a small mass term) applied to a dof
// vector. In these coordinates the kinetic energy is (N/h) sum |z_{k+1}-z_k|^2
// over the fundamental nodes: a Neumann Laplacian in x and a Dirichlet one in y.
class KineticPreconditioner {
 public:
  KineticPreconditioner(int n_bodies, int samples_per_unit, bool pin_x_endpoints)
      : last_(n_bodies * samples_per_unit / 2), pin_(pin_x_endpoints) {
    const double h = 1.0 / samples_per_unit;
    stiffness_ = 2.0 * n_bodies / h;
    mass_ = 2.0 * n_bodies * h;
  }

  DofVector apply(std::span<const double> g) const {
    const auto nx = static_cast<std::size_t>(last_ + 1);
    const auto ny = static_cast<std::size_t>(last_ - 1);
    std::vector<double> lo(nx, -stiffness_), di(nx, 2.0 * stiffness_ + mass_), up(nx, -stiffness_);
    std::vector<double> rhs(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(nx));
    di.front() = di.back() = stiffness_ + mass_;
    if (pin_) {
      di.front() = di.back() = 1.0;
      up.front() = lo.back() = 0.0;
      rhs.front() = rhs.back() = 0.0;
    }
    DofVector out = detail::solve_tridiagonal(lo, di, up, rhs);

    std::vector<double> loy(ny, -stiffness_), diy(ny, 2.0 * stiffness_ + mass_), upy(ny, -stiffness_);
    std::vector<double> rhsy(g.begin() + static_cast<std::ptrdiff_t>(nx), g.end());
    const auto y = detail::solve_tridiagonal(loy, diy, upy, rhsy);
    out.insert(out.end(), y.begin(), y.end());
    return out;
  }

 private:
  int last_;
  bool pin_;
  double stiffness_;
  double mass_;
};

}  // namespace

double SolveConfig::tolerance() const {
  return tolerance_scale * std::sqrt(static_cast<double>(dof_count(n_bodies(), samples_per_unit)));
}

ConstraintConfig SolveConfig::constraints() const {
  return ConstraintConfig{omega, symmetry_mode, 0.0, MonotoneMode::Global};
}

void SolveConfig::validate() const {
  constraints().validate();
  PotentialConfig{alpha, 0.0, potential_enabled}.validate();
  if (samples_per_unit < 2 || samples_per_unit % 2 != 0) {
    throw std::invalid_argument("samples per unit must be even");
  }
  if (softening_schedule.empty() || softening_schedule.back() != 0.0) {
    throw std::invalid_argument("softening schedule must end in 0");
  }
  for (std::size_t i = 0; i + 1 < softening_schedule.size(); ++i) {
    if (!(softening_schedule[i] > softening_schedule[i + 1])) {
      throw std::invalid_argument("softening schedule must be strictly decreasing");
    }
  }
  if (!(tolerance_scale > 0.0) || !(initial_step > 0.0) || !(armijo_c1 > 0.0 && armijo_c1 < 1.0) ||
      !(backtrack_ratio > 0.0 && backtrack_ratio < 1.0) || max_iterations < 1) {
    throw std::invalid_argument("invalid step control or stopping parameters");
  }
  if (seed_count < 1 || seed_amplitudes.empty()) throw std::invalid_argument("need at least one seed");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Collision: return "collision";
    case SolveStatus::Degenerate: return "failed-degenerate";
    case SolveStatus::NonFinite: return "non-finite";
  }
  return "unknown";
}

FundamentalPath project_feasible(const FundamentalPath& path, const SolveConfig& cfg) {
  auto once = [&](const FundamentalPath& p) {
    FundamentalPath q = p;
    q.x0 = project_monotone(p.x0);
    q = recenter(project_topological(q, cfg.omega, 0.0));
    if (cfg.symmetry_mode == SymmetryMode::HN) q = hn_symmetrize(q);
    return q;
  };
  FundamentalPath current = once(path);
  if (cfg.symmetry_mode == SymmetryMode::DN) return current;
  // Symmetrization can move y at a half-integer node; re-project until fixed.
  for (int pass = 1; pass < 3; ++pass) {
    FundamentalPath next = once(current);
    const bool fixed = max_abs_difference(next, current) == 0.0;
    current = std::move(next);
    if (fixed) return current;
  }
  if (max_abs_difference(once(current), current) > 1e-12) {
    throw std::logic_error("H_N projection did not reach a fixed point in 3 passes");
  }
  return current;
}

SolveResult minimize(const SolveConfig& cfg, const FundamentalPath& start) {
  cfg.validate();
  start.validate();
  const int n = cfg.n_bodies();
  if (start.n_bodies != n || start.samples_per_unit != cfg.samples_per_unit) {
    throw std::invalid_argument("start path does not match the solve configuration grid");
  }
  const ConstraintConfig constraint_cfg = cfg.constraints();
  if (!feasibility_report(start, constraint_cfg).all_ok()) {
    throw std::invalid_argument("start path is infeasible for the requested sign vector");
  }
  if (cfg.symmetry_mode == SymmetryMode::HN && max_abs_difference(hn_symmetrize(start), start) > 1e-12) {
    throw std::invalid_argument("start path is not H_N-symmetric");
  }

  const KineticPreconditioner precond(n, cfg.samples_per_unit, cfg.pin_x_endpoints);
  const double tol = cfg.tolerance();
  // Plain gradient steps need s below the reciprocal largest kinetic eigenvalue.
  const double euclid_step = start.step() / (8.0 * n);

  SolveResult result;
  result.path = start;
  result.status = SolveStatus::MaxIterations;

  auto mask_pins = [&](DofVector& g) {
    if (cfg.pin_x_endpoints) g.front() = g[static_cast<std::size_t>(start.last_node())] = 0.0;
  };

  std::vector<FundamentalPath> candidates{start};
  bool failed = false;
  for (std::size_t stage = 0; stage < cfg.softening_schedule.size() && !failed; ++stage) {
    const double eps = cfg.softening_schedule[stage];
    const bool exact = eps == 0.0;
    const PotentialConfig pcfg{cfg.alpha, eps, cfg.potential_enabled};

    auto evaluate = [&](const FundamentalPath& p) -> std::optional<ActionAndGradient> {
      if (exact && cfg.potential_enabled && min_separation(p) < cfg.collision_floor) return std::nullopt;
      auto e = try_action_and_gradient(p, pcfg);
      if (e && !std::isfinite(e->value.total)) return std::nullopt;
      if (e) mask_pins(e->gradient);
      return e;
    };

    // The incumbent is the least-action entry point at this eps among the
    // start path and every earlier stage result. Softened stages can drift
    // toward a collision on the constraint boundary; this discards them.
    FundamentalPath current = result.path;
    std::optional<ActionAndGradient> eval;
    StageSummary summary;
    summary.softening = eps;
    for (std::size_t c = candidates.size(); c-- > 0;) {
      auto e = evaluate(candidates[c]);
      if (e && (!eval || e->value.total < eval->value.total)) {
        eval = std::move(e);
        current = candidates[c];
        summary.entry_point = static_cast<int>(c);
      }
    }
    if (!eval) {
      result.status = exact ? SolveStatus::Collision : SolveStatus::NonFinite;
      result.failure_reason = "action undefined at the start of the eps=" + std::to_string(eps) + " stage";
      failed = true;
      break;
    }
    summary.initial_action = eval->value.total;
    summary.trace_offset = result.trace.size();
    result.trace.push_back(eval->value.total);

    double precond_step = cfg.initial_step;
    double plain_step = euclid_step;
    bool stage_converged = false;
    double pg_norm = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
      const DofVector x = to_dofs(current);
      const DofVector& g = eval->gradient;
      {
        DofVector shifted(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - g[i];
        const DofVector projected =
            to_dofs(project_feasible(from_dofs(n, cfg.samples_per_unit, shifted), cfg));
        pg_norm = norm2(difference(x, projected));
      }
      if (pg_norm <= tol) {
        stage_converged = true;
        break;
      }

      // Armijo backtracking along the projection arc; a preconditioned
      // direction first, the plain gradient if that fails to decrease.
      auto line_search = [&](const DofVector& direction, double& step, double max_step) -> bool {
        double s = std::min(2.0 * step, max_step);
        for (int tries = 0; tries < 60; ++tries, s *= cfg.backtrack_ratio) {
          DofVector trial_dofs(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) trial_dofs[i] = x[i] + s * direction[i];
          FundamentalPath trial = project_feasible(from_dofs(n, cfg.samples_per_unit, trial_dofs), cfg);
          auto trial_eval = evaluate(trial);
          if (!trial_eval) continue;
          const DofVector moved = difference(to_dofs(trial), x);
          const double predicted = dot(g, moved);
          const double value = trial_eval->value.total;
          if (value <= eval->value.total + cfg.armijo_c1 * predicted && value <= eval->value.total) {
            if (predicted == 0.0) return false;  // projection absorbed the whole step
            step = s;
            current = std::move(trial);
            eval = std::move(trial_eval);
            return true;
          }
        }
        return false;
      };

      DofVector direction = precond.apply(g);
      for (double& d : direction) d = -d;
      bool accepted = line_search(direction, precond_step, 4.0 * cfg.initial_step);
      if (!accepted) {
        DofVector steepest(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) steepest[i] = -g[i];
        accepted = line_search(steepest, plain_step, 1e3 * euclid_step);
      }
      if (!accepted) {
        result.status = SolveStatus::Stalled;
        break;
      }
      result.trace.push_back(eval->value.total);
    }

    summary.iterations = it;
    summary.final_action = eval->value.total;
    summary.projected_gradient_norm = pg_norm;
    summary.converged = stage_converged;
    result.stages.push_back(summary);
    result.iterations += it;
    result.path = current;
    candidates.push_back(current);
    result.projected_gradient_norm = pg_norm;
    if (exact) {
      result.breakdown = eval->value;
      if (stage_converged) {
        result.status = SolveStatus::Converged;
      } else if (result.status != SolveStatus::Stalled) {
        result.status = SolveStatus::MaxIterations;
      }
    } else if (result.status == SolveStatus::Stalled) {
      // A stalled softened stage is not fatal; the next stage starts from here.
      result.status = SolveStatus::MaxIterations;
    }
  }

  result.feasibility = feasibility_report(result.path, constraint_cfg);
  result.min_separation = min_separation(result.path);
  if (!failed) {
    const double start_span = start.x0.back() - start.x0.front();
    if (result.path.x0.back() - result.path.x0.front() < 1e-4 * std::max(1.0, start_span)) {
      result.status = SolveStatus::Degenerate;
      result.failure_reason = "x0 collapsed to a point (collinear degenerate limit)";
    } else if (cfg.potential_enabled && result.min_separation < cfg.collision_floor) {
      result.status = SolveStatus::Collision;
      result.failure_reason = "bodies closer than the collision floor";
    } else if (result.status != SolveStatus::Converged && result.failure_reason.empty()) {
      result.failure_reason = "projected gradient norm " + std::to_string(result.projected_gradient_norm) +
                              " above tolerance " + std::to_string(tol);
    }
  } else {
    auto value = try_action(result.path, PotentialConfig{cfg.alpha, 0.0, cfg.potential_enabled});
    if (value) result.breakdown = *value;
  }
  result.converged = result.status == SolveStatus::Converged && result.feasibility.all_ok();
  return result;
}

std::vector<FundamentalPath> multistart_seeds(const SolveConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_bodies();
  const double radius = ngon_radius(n, cfg.alpha);
  std::mt19937_64 rng(cfg.random_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FundamentalPath> seeds;
  seeds.reserve(static_cast<std::size_t>(cfg.seed_count));
  for (int i = 0; i < cfg.seed_count; ++i) {
    const double amplitude_jitter = i == 0 ? 1.0 : 0.9 + 0.2 * unit(rng);
    const double spread_jitter = i == 0 ? 1.0 : 0.8 + 0.4 * unit(rng);
    const double amplitude =
        radius * cfg.seed_amplitudes[static_cast<std::size_t>(i) % cfg.seed_amplitudes.size()] * amplitude_jitter;
    const double spread = 4.0 * radius / n * spread_jitter;
    FundamentalPath start = seed(cfg.omega, amplitude, spread, cfg.samples_per_unit);
    seeds.push_back(project_feasible(start, cfg));
  }
  return seeds;
}

const SolveResult& MultistartResult::best() const {
  if (!best_index) throw std::runtime_error("all multistart runs failed");
  return runs[*best_index];
}

MultistartResult multistart(const SolveConfig& cfg, int threads) {
  const std::vector<FundamentalPath> seeds = multistart_seeds(cfg);
  MultistartResult out;
  out.runs.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) out.runs[i] = minimize(cfg, seeds[i]);
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(seeds.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    if (!out.runs[i].converged) continue;
    if (!out.best_index || out.runs[i].breakdown.total < out.runs[*out.best_index].breakdown.total) {
      out.best_index = i;
    }
  }
  return out;
}

SolveResult refine(const SolveResult& result, const SolveConfig& cfg, int samples_per_unit) {
  if (samples_per_unit < result.path.samples_per_unit || samples_per_unit % 2 != 0) {
    throw std::invalid_argument("refinement needs an even sample count no smaller than the current one");
  }
  SolveConfig fine = cfg;
  fine.samples_per_unit = samples_per_unit;
  fine.softening_schedule = {0.0};
  FundamentalPath start = project_feasible(resample(result.path, samples_per_unit), fine);
  SolveResult refined = minimize(fine, start);
  return refined;
}

}  // namespace choreo
