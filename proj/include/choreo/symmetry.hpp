#pragma once

// D_N and H_N actions on loops and reconstruction of the full equivariant loop
// from fundamental-domain data.

#include <utility>
#include <vector>

#include "choreo/loop_model.hpp"

namespace choreo {

/// Planar part of a group element: q -> (negate ? -1 : 1) * (conjugate ? conj q : q).
struct SpaceMap {
  bool conjugate = false;
  bool negate = false;

  Point operator()(Point q) const {
    if (conjugate) q = std::conj(q);
    return negate ? -q : q;
  }
  friend bool operator==(const SpaceMap&, const SpaceMap&) = default;
};

/// Action of one group element on loops: time map t -> sign*t + shift_halves/2
/// on R/NZ, a planar map, and a permutation of body indices.
struct GroupElementAction {
  int time_sign = 1;
  int time_shift_halves = 0;
  SpaceMap space;
  std::vector<int> index_perm;

  static GroupElementAction identity(int n_bodies);

  double map_time(double t) const { return time_sign * t + 0.5 * time_shift_halves; }

  /// Throws std::invalid_argument unless time_sign is +-1 and index_perm is a bijection.
  void validate() const;

  friend bool operator==(const GroupElementAction&, const GroupElementAction&) = default;
};

/// (a * b) acts as a(b(loop)).
GroupElementAction compose(const GroupElementAction& a, const GroupElementAction& b);
GroupElementAction inverse(const GroupElementAction& a);

/// g: t -> t - 1, identity, cycle (0 1 ... N-1);
/// h: t -> 1 - t, conjugation, (0 N-1)(1 N-2)...
std::pair<GroupElementAction, GroupElementAction> dn_generators(int n_bodies);

/// Output body j at time t is space(input body perm^-1(j) at time^-1(t)).
/// Requires an even number of samples per unit so half-integer shifts land on nodes.
FullLoop apply(const GroupElementAction& action, const FullLoop& loop);

/// z_0 at an arbitrary time: reduced mod N, reflected through
/// z_0(N - t) = conj z_0(t) past N/2, linearly interpolated between nodes.
Point evaluate_z0(const FundamentalPath& path, double t);

/// z_j(t) = z_0(j + t).
Point body_position(const FundamentalPath& path, int body, double t);

/// z_0 at all N*M nodes of [0, N).
std::vector<Point> z0_samples(const FundamentalPath& path);

/// Full loop with body j equal to z_0 shifted by j*M nodes.
FullLoop reconstruct(const FundamentalPath& path);

/// Average of `path` and its image under the extra H_N relation
/// z_0(t) = -z_0(N/2 - t) (N odd) or -conj z_0(N/2 - t) (N even).
FundamentalPath hn_symmetrize(const FundamentalPath& path);

}  // namespace choreo
