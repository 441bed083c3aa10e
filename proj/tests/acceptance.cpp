// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "choreo/action.hpp"
#include "choreo/census.hpp"
#include "choreo/cli_io.hpp"
#include "choreo/constraints.hpp"
#include "choreo/optimizer.hpp"
#include "choreo/symmetry.hpp"
#include "choreo/verify.hpp"
#include "support.hpp"

using namespace choreo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int worker_count() {
  const int env = cli::threads_from_env();
  if (env > 0) return env;
  return std::max(1u, std::thread::hardware_concurrency());
}

FullLoop random_loop(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  FullLoop loop{n, m, {}};
  loop.bodies.assign(static_cast<std::size_t>(n), std::vector<Point>(static_cast<std::size_t>(n * m)));
  for (auto& b : loop.bodies) {
    for (auto& z : b) z = {g(rng), g(rng)};
  }
  return loop;
}

FullLoop power(const GroupElementAction& a, FullLoop loop, int times) {
  for (int i = 0; i < times; ++i) loop = apply(a, loop);
  return loop;
}

double ngon_action(int n) {
  const double r = ngon_radius(n);
  const double w = 2 * std::numbers::pi / n;
  double c = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) c += 1.0 / (2 * std::sin(std::numbers::pi * (k - j) / n));
  }
  return n * (0.5 * n * r * r * w * w + c / r);
}

double mean_pairwise_distance(const FullLoop& loop) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < loop.bodies.front().size(); ++k) {
    for (std::size_t a = 0; a < loop.bodies.size(); ++a) {
      for (std::size_t b = a + 1; b < loop.bodies.size(); ++b) {
        sum += std::abs(loop.bodies[a][k] - loop.bodies[b][k]);
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

Outcome census_counts() {
  const auto t0 = Clock::now();
  for (int n = 3; n <= 16; ++n) {
    const auto f = count_formula(n), b = count_burnside(n), e = count_classes_enumerated(n);
    if (f != b || f != e) return {false, fmt("N=%d formula=%llu burnside=%llu enumerated=%llu", n, (unsigned long long)f,
                                             (unsigned long long)b, (unsigned long long)e)};
  }
  const double s = seconds_since(t0);
  return {s < 2.0, fmt("N=3..16 agree, %.3f s", s)};
}

Outcome group_action() {
  std::mt19937_64 rng(11);
  double worst = 0.0, invariance = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 4;
    const auto [g, h] = dn_generators(n);
    const FullLoop loop = random_loop(n, 32, rng);
    worst = std::max(worst, test_support::max_loop_difference(power(g, loop, n), loop));
    worst = std::max(worst, test_support::max_loop_difference(power(h, loop, 2), loop));
    worst = std::max(worst, test_support::max_loop_difference(power(compose(g, h), loop, 2), loop));
    const FullLoop sym = reconstruct(test_support::random_path(n, 32, rng));
    invariance = std::max(invariance, test_support::max_loop_difference(apply(g, sym), sym));
    invariance = std::max(invariance, test_support::max_loop_difference(apply(h, sym), sym));
  }
  return {worst <= 1e-12 && invariance <= 1e-12, fmt("relation error %.2e, invariance error %.2e", worst, invariance)};
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(12);
  double worst = 0.0;
  const PotentialConfig cfg{1.0, 1e-2};
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const auto p = test_support::random_feasible_path(test_support::random_omega(n, rng), 32, rng);
    const DofVector g = gradient(p, cfg);
    DofVector v = to_dofs(p);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double keep = v[i], step = 1e-6;
      v[i] = keep + step;
      const double up = action(from_dofs(n, 32, v), cfg).total;
      v[i] = keep - step;
      const double down = action(from_dofs(n, 32, v), cfg).total;
      v[i] = keep;
      const double fd = (up - down) / (2 * step);
      diff = std::max(diff, std::abs(g[i] - fd));
      scale = std::max(scale, std::abs(fd));
    }
    worst = std::max(worst, diff / scale);
  }
  const double s = seconds_since(t0);
  return {worst <= 1e-6 && s < 30.0, fmt("max relative error %.2e, %.2f s", worst, s)};
}

Outcome ngon_convergence() {
  std::string detail;
  bool ok = true;
  for (int n = 3; n <= 6; ++n) {
    const double exact = ngon_action(n);
    const double e64 = std::abs(action(rotating_ngon(n, 64)).total - exact);
    const double e256 = std::abs(action(rotating_ngon(n, 256)).total - exact);
    const double order_action = std::log(e64 / e256) / std::log(4.0);
    const double r64 = el_residual(reconstruct(rotating_ngon(n, 64)));
    const double r256 = el_residual(reconstruct(rotating_ngon(n, 256)));
    const double order_el = std::log(r64 / r256) / std::log(4.0);
    ok &= std::abs(order_action - 2.0) <= 0.4 && std::abs(order_el - 2.0) <= 0.4;
    detail += fmt("%sN=%d %.2f/%.2f", n == 3 ? "" : ", ", n, order_action, order_el);
  }
  return {ok, "orders (action/EL) " + detail};
}

Outcome lagrange_recovery() {
  const auto t0 = Clock::now();
  SolveConfig cfg{.omega = SignVector::parse(3, "+1,+1")};
  cfg.samples_per_unit = 128;
  cfg.seed_count = 3;
  const auto ms = multistart(cfg, worker_count());
  if (!ms.best_index) return {false, "no converged run"};
  const FullLoop loop = reconstruct(ms.best().path);
  const double disp = radii_dispersion(loop);
  const int bubbles = bubble_count(ms.best().path);
  const double s = seconds_since(t0);
  return {disp <= 1e-2 && bubbles == 1 && s < 120.0, fmt("dispersion %.2e, bubbles %d, %.1f s", disp, bubbles, s)};
}

Outcome figure_eight() {
  const auto t0 = Clock::now();
  SolveConfig cfg{.omega = SignVector::parse(3, "-1,+1")};
  cfg.samples_per_unit = 256;
  const auto ms = multistart(cfg, worker_count());
  if (!ms.best_index) return {false, "no converged run"};
  const auto fine = refine(ms.best(), cfg, 512);
  if (!fine.converged) return {false, "refinement did not converge: " + fine.failure_reason};
  VerifyOptions opt;
  opt.expected_omega = cfg.omega;
  const auto r = verify(fine.path, opt);
  const double mean_dist = mean_pairwise_distance(reconstruct(fine.path));
  const double s = seconds_since(t0);
  const bool ok = r.min_separation >= 0.1 * mean_dist && r.sign_pattern == cfg.omega && r.margins.monotone_margin > 0.0 &&
                  r.margins.velocity_margin > 0.0 && r.margins.endpoint_velocity_start <= 1e-2 &&
                  r.margins.endpoint_velocity_end <= 1e-2 && r.el_residual_max <= 1e-3 && r.return_error.has_value() &&
                  *r.return_error <= 5e-2 && r.bubble_count == 2 && s < 600.0;
  return {ok, fmt("sep %.3f (mean %.3f), EL %.2e, endpoint %.2e/%.2e, return %.2e, bubbles %d, %.1f s", r.min_separation,
                  mean_dist, r.el_residual_max, r.margins.endpoint_velocity_start, r.margins.endpoint_velocity_end,
                  r.return_error.value_or(NAN), r.bubble_count.value_or(-1), s)};
}

Outcome super_eight() {
  SolveConfig cfg{.omega = SignVector::parse(4, "+1,-1,+1")};
  cfg.symmetry_mode = SymmetryMode::HN;
  cfg.samples_per_unit = 256;
  const auto ms = multistart(cfg, worker_count());
  if (!ms.best_index) return {false, "no converged run"};
  const auto& path = ms.best().path;
  const auto ids = hn_identities(reconstruct(path));
  const auto crossings = body_crossing_counts(path);
  const double el = el_residual(reconstruct(path));
  const int bubbles = bubble_count(path);
  const double para = ids.parallelogram.value_or(INFINITY);
  const bool ok = ids.relation <= 1e-10 && para <= 1e-10 && crossings[1] == 1 && (crossings[0] == 1 || crossings[0] == 2) &&
                  el <= 1e-3 && bubbles == 3;
  return {ok, fmt("relation %.1e, parallelogram %.1e, crossings body0=%d body1=%d, EL %.2e, bubbles %d", ids.relation, para,
                  crossings[0], crossings[1], el, bubbles)};
}

Outcome coercivity() {
  std::mt19937_64 rng(13);
  int held = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 4;
    const auto c = coercivity_check(test_support::random_feasible_path(test_support::random_omega(n, rng), 16, rng));
    held += c.holds && c.action_total >= c.bound;
  }
  return {held == 200, fmt("%d/200 paths satisfy the bound", held)};
}

Outcome pava_oracle() {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  bool idempotent = true;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t len = 1 + trial % 6;
    std::vector<double> x(len);
    for (auto& v : x) v = g(rng);
    const auto y = project_monotone(x);
    // Brute force over block partitions.
    double best_dist = INFINITY;
    std::vector<double> best;
    for (std::uint32_t cuts = 0; cuts < (1u << (len - 1)); ++cuts) {
      std::vector<double> z(len);
      std::size_t start = 0;
      for (std::size_t i = 0; i < len; ++i) {
        if (i != len - 1 && !(cuts >> i & 1u)) continue;
        double mean = 0.0;
        for (std::size_t k = start; k <= i; ++k) mean += x[k];
        mean /= static_cast<double>(i - start + 1);
        for (std::size_t k = start; k <= i; ++k) z[k] = mean;
        start = i + 1;
      }
      bool monotone = true;
      double d = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        if (i + 1 < len) monotone &= z[i] <= z[i + 1];
        d += (x[i] - z[i]) * (x[i] - z[i]);
      }
      if (monotone && d < best_dist) {
        best_dist = d;
        best = z;
      }
    }
    for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(y[i] - best[i]));
    idempotent &= project_monotone(y) == y;
  }
  return {worst <= 1e-10 && idempotent, fmt("max deviation %.2e, idempotent %s", worst, idempotent ? "yes" : "no")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "choreo_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string exe = CHOREO_CLI_PATH;
  for (const char* tag : {"a", "b"}) {
    const auto json = dir / (std::string(tag) + ".json");
    const auto svg = dir / (std::string(tag) + ".svg");
    const std::string solve = exe + " solve --n 3 --omega=-1,+1 --m 64 --out " + json.string() + " > /dev/null 2>&1";
    const std::string plot = exe + " plot --in " + json.string() + " --out " + svg.string() + " > /dev/null 2>&1";
    if (std::system(solve.c_str()) != 0) return {false, "solve run failed"};
    if (std::system(plot.c_str()) != 0) return {false, "plot run failed"};
  }
  const bool same_json = slurp(dir / "a.json") == slurp(dir / "b.json") && !slurp(dir / "a.json").empty();
  const bool same_svg = slurp(dir / "a.svg") == slurp(dir / "b.svg") && !slurp(dir / "a.svg").empty();
  return {same_json && same_svg, fmt("json %s, svg %s", same_json ? "identical" : "differ", same_svg ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"census counts agree for N=3..16", census_counts},
      {"dihedral relations and reconstruct invariance", group_action},
      {"gradient matches finite differences", gradient_check},
      {"N-gon action and EL residual converge with order 2", ngon_convergence},
      {"all-plus class at N=3 yields the equilateral solution", lagrange_recovery},
      {"figure-eight class verifies", figure_eight},
      {"Super-Eight in H_N mode", super_eight},
      {"coercivity bound", coercivity},
      {"monotone projection matches the QP oracle", pava_oracle},
      {"CLI output is byte-identical across runs", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
