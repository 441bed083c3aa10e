#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "choreo/action.hpp"
#include "choreo/symmetry.hpp"
#include "support.hpp"

using namespace choreo;

namespace {

// Closed-form action of the rotating N-gon over one period N.
double ngon_action(int n, double alpha) {
  const double r = ngon_radius(n, alpha);
  const double w = 2 * std::numbers::pi / n;
  double c = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) c += std::pow(2 * std::sin(std::numbers::pi * (k - j) / n), -alpha);
  }
  return n * (0.5 * n * r * r * w * w + c / std::pow(r, alpha));
}

double inf_norm(const DofVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("N-gon action converges with order 2") {
  for (int n = 3; n <= 6; ++n) {
    const double exact = ngon_action(n, 1.0);
    const double e64 = std::abs(action(rotating_ngon(n, 64)).total - exact);
    const double e128 = std::abs(action(rotating_ngon(n, 128)).total - exact);
    const double e256 = std::abs(action(rotating_ngon(n, 256)).total - exact);
    CHECK(std::log(e64 / e256) / std::log(4.0) == doctest::Approx(2.0).epsilon(0.2));
    CHECK(std::log(e64 / e128) / std::log(2.0) == doctest::Approx(2.0).epsilon(0.2));
    CHECK(e256 / exact < 1e-4);
  }
}

TEST_CASE("breakdown and full-loop evaluation agree") {
  std::mt19937_64 rng(1);
  for (int n = 3; n <= 6; ++n) {
    const auto p = test_support::random_feasible_path(test_support::random_omega(n, rng), 16, rng);
    const auto a = action(p);
    CHECK(a.total == doctest::Approx(a.kinetic + a.potential).epsilon(1e-15));
    CHECK(a.kinetic >= 0.0);
    CHECK(a.potential > 0.0);
    const auto b = loop_action(reconstruct(p));
    CHECK(b.kinetic == doctest::Approx(a.kinetic).epsilon(1e-12));
    CHECK(b.potential == doctest::Approx(a.potential).epsilon(1e-12));
    const auto f = fundamental_domain_action(p);
    CHECK(std::abs(2 * n * f.total - a.total) <= 1e-10 * a.total);
  }
}

TEST_CASE("homogeneity under scaling") {
  std::mt19937_64 rng(2);
  for (double alpha : {1.0, 2.0}) {
    const auto p = test_support::random_feasible_path(SignVector::parse(4, "+1,-1,+1"), 16, rng);
    const double lambda = 1.7;
    FundamentalPath q = p;
    for (auto& x : q.x0) x *= lambda;
    for (auto& y : q.y0) y *= lambda;
    const PotentialConfig cfg{alpha};
    const auto a = action(p, cfg), b = action(q, cfg);
    CHECK(b.kinetic == doctest::Approx(lambda * lambda * a.kinetic).epsilon(1e-13));
    CHECK(b.potential == doctest::Approx(std::pow(lambda, -alpha) * a.potential).epsilon(1e-13));
  }
}

TEST_CASE("softening bounds the potential") {
  std::mt19937_64 rng(3);
  const int n = 5;
  const auto p = test_support::random_feasible_path(test_support::random_omega(n, rng), 16, rng);
  for (double eps : {1.0, 10.0, 100.0}) {
    const double pairs = n * (n - 1) / 2.0;
    CHECK(action(p, PotentialConfig{1.0, eps}).potential <= pairs * n * std::pow(eps, -1.0));
  }
}

TEST_CASE("invariance under rigid motions") {
  std::mt19937_64 rng(4);
  const auto p = test_support::random_feasible_path(SignVector::parse(5, "+1,-1,-1,+1"), 16, rng);
  const FullLoop loop = reconstruct(p);
  const auto base = loop_action(loop);
  FullLoop moved = loop;
  const Point rot = std::polar(1.0, 0.73), shift{2.5, -1.25};
  for (auto& b : moved.bodies) {
    for (auto& z : b) z = rot * z + shift;
  }
  const auto a = loop_action(moved);
  CHECK(std::abs(a.potential - base.potential) <= 1e-12 * base.potential);
  CHECK(std::abs(a.kinetic - base.kinetic) <= 1e-12 * base.kinetic);
}

TEST_CASE("collisions at nodes") {
  FundamentalPath p = FundamentalPath::zeros(3, 8);
  for (int k = 0; k <= p.last_node(); ++k) p.x0[k] = k * 0.1;
  // y0(1) = 0 puts z0(1) on its mirror image z0(2), so bodies 1 and 2 meet at t = 0.
  CHECK_THROWS_AS(action(p), CollisionError);
  CHECK_FALSE(try_action(p).has_value());
  CHECK(try_action(p, PotentialConfig{1.0, 1e-2}).has_value());
  CHECK(min_separation(p) == 0.0);
}

TEST_CASE("strong force blows up near a collision") {
  std::mt19937_64 rng(5);
  const auto w = SignVector::parse(4, "+1,+1,+1");
  auto near = [&](double delta) {
    FundamentalPath p = seed(w, 0.6, 1.0, 32);
    // z0(1) and its mirror z0(3) are 2 |y0(1)| apart.
    p.y0[static_cast<std::size_t>(p.half_integer_node(2))] = delta / 2;
    return action(p, PotentialConfig{2.0}).total;
  };
  const double a2 = near(1e-2), a4 = near(1e-4);
  CHECK(a4 > 100 * a2);
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(6);
  for (int n = 3; n <= 5; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto p = test_support::random_feasible_path(test_support::random_omega(n, rng), 32, rng);
      const PotentialConfig cfg{1.0, 1e-2};
      const DofVector g = gradient(p, cfg);
      DofVector v = to_dofs(p), fd(v.size());
      const double step = 1e-6;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double keep = v[i];
        v[i] = keep + step;
        const double up = action(from_dofs(n, 32, v), cfg).total;
        v[i] = keep - step;
        const double down = action(from_dofs(n, 32, v), cfg).total;
        v[i] = keep;
        fd[i] = (up - down) / (2 * step);
      }
      DofVector diff(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) diff[i] = g[i] - fd[i];
      CHECK(inf_norm(diff) / inf_norm(fd) <= 1e-6);
    }
  }
}

TEST_CASE("gradient vanishes along horizontal translation") {
  std::mt19937_64 rng(7);
  const auto p = test_support::random_feasible_path(SignVector::parse(4, "+1,-1,-1"), 16, rng);
  const DofVector g = gradient(p);
  double directional = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < p.x0.size(); ++k) {
    directional += g[k];
    scale += std::abs(g[k]);
  }
  CHECK(std::abs(directional) <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("N-gon is a discrete critical point up to O(h^2)") {
  for (int n = 3; n <= 5; ++n) {
    // Gradient entries are h times the pointwise residual.
    const double r32 = inf_norm(gradient(rotating_ngon(n, 32))) * 32;
    const double r128 = inf_norm(gradient(rotating_ngon(n, 128))) * 128;
    CHECK(std::log(r32 / r128) / std::log(4.0) == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("coercivity bound") {
  std::mt19937_64 rng(8);
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = test_support::random_feasible_path(test_support::random_omega(n, rng), 16, rng);
      const auto c = coercivity_check(p);
      CHECK(c.holds);
      CHECK(c.action_total >= c.bound);
    }
  }
  for (const auto& cls : enumerate_classes(4)) {
    for (const auto& w : cls.members) CHECK(coercivity_check(seed(w, 0.5, 1.0, 16)).holds);
  }
  // Both sides grow like lambda^2 for large scalings.
  const auto p = seed(SignVector::parse(5, "+1,-1,+1,-1"), 0.5, 1.0, 16);
  FundamentalPath big = p;
  for (auto& x : big.x0) x *= 10;
  for (auto& y : big.y0) y *= 10;
  const auto small_c = coercivity_check(p), big_c = coercivity_check(big);
  CHECK(big_c.bound == doctest::Approx(100 * small_c.bound).epsilon(1e-12));
  CHECK(big_c.holds);
  FundamentalPath shifted = p;
  for (auto& x : shifted.x0) x += 100.0;
  CHECK_THROWS(coercivity_check(shifted));
}
