#include "choreo/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace choreo {

namespace {

int wrap(int value, int period) {
  const int r = value % period;
  return r < 0 ? r + period : r;
}

}  // namespace

GroupElementAction GroupElementAction::identity(int n_bodies) {
  GroupElementAction a;
  a.index_perm.resize(static_cast<std::size_t>(n_bodies));
  for (int j = 0; j < n_bodies; ++j) a.index_perm[static_cast<std::size_t>(j)] = j;
  return a;
}

void GroupElementAction::validate() const {
  if (time_sign != 1 && time_sign != -1) throw std::invalid_argument("time map must be t -> +-t + c");
  std::vector<bool> seen(index_perm.size(), false);
  for (int p : index_perm) {
    if (p < 0 || p >= static_cast<int>(index_perm.size()) || seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("index map is not a permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

GroupElementAction compose(const GroupElementAction& a, const GroupElementAction& b) {
  if (a.index_perm.size() != b.index_perm.size()) throw std::invalid_argument("actions on different N");
  const int n = static_cast<int>(a.index_perm.size());
  GroupElementAction out;
  out.time_sign = a.time_sign * b.time_sign;
  out.time_shift_halves = wrap(a.time_sign * b.time_shift_halves + a.time_shift_halves, 2 * n);
  out.space = SpaceMap{a.space.conjugate != b.space.conjugate, a.space.negate != b.space.negate};
  out.index_perm.resize(a.index_perm.size());
  for (std::size_t j = 0; j < a.index_perm.size(); ++j) {
    out.index_perm[j] = a.index_perm[static_cast<std::size_t>(b.index_perm[j])];
  }
  return out;
}

GroupElementAction inverse(const GroupElementAction& a) {
  const int n = static_cast<int>(a.index_perm.size());
  GroupElementAction out;
  out.time_sign = a.time_sign;
  out.time_shift_halves = wrap(-a.time_sign * a.time_shift_halves, 2 * n);
  out.space = a.space;  // every planar map here is an involution
  out.index_perm.resize(a.index_perm.size());
  for (std::size_t j = 0; j < a.index_perm.size(); ++j) {
    out.index_perm[static_cast<std::size_t>(a.index_perm[j])] = static_cast<int>(j);
  }
  return out;
}

std::pair<GroupElementAction, GroupElementAction> dn_generators(int n_bodies) {
  if (n_bodies < 3) throw std::invalid_argument("dihedral action needs N >= 3");
  GroupElementAction g = GroupElementAction::identity(n_bodies);
  g.time_shift_halves = wrap(-2, 2 * n_bodies);
  for (int j = 0; j < n_bodies; ++j) g.index_perm[static_cast<std::size_t>(j)] = (j + 1) % n_bodies;

  GroupElementAction h = GroupElementAction::identity(n_bodies);
  h.time_sign = -1;
  h.time_shift_halves = 2;
  h.space.conjugate = true;
  for (int j = 0; j < n_bodies; ++j) h.index_perm[static_cast<std::size_t>(j)] = n_bodies - 1 - j;
  return {g, h};
}

FullLoop apply(const GroupElementAction& action, const FullLoop& loop) {
  action.validate();
  if (static_cast<int>(action.index_perm.size()) != loop.n_bodies) {
    throw std::invalid_argument("action and loop disagree on the number of bodies");
  }
  if (loop.samples_per_unit % 2 != 0) {
    throw std::invalid_argument("grid spacing must divide 1/2 for half-integer time shifts");
  }
  const int nodes = loop.node_count();
  const int shift_nodes = action.time_shift_halves * loop.samples_per_unit / 2;
  const GroupElementAction inv = inverse(action);

  FullLoop out;
  out.n_bodies = loop.n_bodies;
  out.samples_per_unit = loop.samples_per_unit;
  out.bodies.assign(loop.bodies.size(), std::vector<Point>(static_cast<std::size_t>(nodes)));
  for (int j = 0; j < loop.n_bodies; ++j) {
    const auto& src = loop.bodies[static_cast<std::size_t>(inv.index_perm[static_cast<std::size_t>(j)])];
    auto& dst = out.bodies[static_cast<std::size_t>(j)];
    for (int k = 0; k < nodes; ++k) {
      // time^-1(t) = sign * (t - c)
      const int source = wrap(action.time_sign * (k - shift_nodes), nodes);
      dst[static_cast<std::size_t>(k)] = action.space(src[static_cast<std::size_t>(source)]);
    }
  }
  return out;
}

Point evaluate_z0(const FundamentalPath& path, double t) {
  const double period = path.n_bodies;
  double reduced = std::fmod(t, period);
  if (reduced < 0.0) reduced += period;
  bool mirrored = false;
  if (reduced > 0.5 * period) {
    reduced = period - reduced;
    mirrored = true;
  }
  double s = reduced * path.samples_per_unit;
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) s = nearest;
  const int last = path.last_node();
  int k = std::clamp(static_cast<int>(std::floor(s)), 0, last);
  Point value;
  if (k >= last) {
    value = path.at(last);
  } else {
    const double w = s - k;
    value = w == 0.0 ? path.at(k) : (1.0 - w) * path.at(k) + w * path.at(k + 1);
  }
  return mirrored ? std::conj(value) : value;
}

Point body_position(const FundamentalPath& path, int body, double t) {
  if (body < 0 || body >= path.n_bodies) throw std::out_of_range("body index out of range");
  return evaluate_z0(path, body + t);
}

std::vector<Point> z0_samples(const FundamentalPath& path) {
  const int last = path.last_node();
  const int nodes = 2 * last;
  std::vector<Point> z(static_cast<std::size_t>(nodes));
  for (int k = 0; k <= last; ++k) z[static_cast<std::size_t>(k)] = path.at(k);
  for (int k = last + 1; k < nodes; ++k) z[static_cast<std::size_t>(k)] = std::conj(path.at(nodes - k));
  return z;
}

FullLoop reconstruct(const FundamentalPath& path) {
  path.validate();
  const std::vector<Point> z = z0_samples(path);
  const int nodes = static_cast<int>(z.size());
  FullLoop loop;
  loop.n_bodies = path.n_bodies;
  loop.samples_per_unit = path.samples_per_unit;
  loop.bodies.resize(static_cast<std::size_t>(path.n_bodies));
  for (int j = 0; j < path.n_bodies; ++j) {
    auto& body = loop.bodies[static_cast<std::size_t>(j)];
    body.resize(static_cast<std::size_t>(nodes));
    const int shift = j * path.samples_per_unit;
    for (int k = 0; k < nodes; ++k) body[static_cast<std::size_t>(k)] = z[static_cast<std::size_t>((k + shift) % nodes)];
  }
  return loop;
}

FundamentalPath hn_symmetrize(const FundamentalPath& path) {
  FundamentalPath out = path;
  const int last = path.last_node();
  // On [0, N/2] the relation pairs node k with node last - k. x is odd about
  // N/4 in both parities; y is even (N even) or odd (N odd).
  const double y_parity = path.n_bodies % 2 == 0 ? 1.0 : -1.0;
  for (int k = 0; k <= last; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto r = static_cast<std::size_t>(last - k);
    out.x0[i] = 0.5 * (path.x0[i] - path.x0[r]);
    out.y0[i] = 0.5 * (path.y0[i] + y_parity * path.y0[r]);
  }
  return out;
}

}  // namespace choreo
