#pragma once

// Sign vectors selecting a topological class of D_N-symmetric loops, and the
// combinatorics of identifying classes that yield the same orbit up to time
// reversal and rigid motion.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace choreo {

/// A sign vector (w_1, ..., w_{N-1}) with every entry +1 or -1.
///
/// Entries are addressed with the 1-based index used for half-integer times:
/// sign(j) is the required sign of Im z_0(j/2).
class SignVector {
 public:
  SignVector(int n_bodies, std::vector<int> signs);

  /// Bit j-1 of `minus_mask` set means w_j = -1.
  static SignVector from_mask(int n_bodies, std::uint64_t minus_mask);

  /// Parses "s1,s2,..." where each token is one of +1, -1, 1, +, -.
  static SignVector parse(int n_bodies, std::string_view text);

  int n_bodies() const { return n_bodies_; }
  int size() const { return static_cast<int>(signs_.size()); }
  int sign(int j) const;
  const std::vector<int>& signs() const { return signs_; }
  std::uint64_t minus_mask() const;

  /// Lexicographic key with +1 ordered before -1; w_1 is most significant.
  std::uint64_t lex_key() const;

  /// "+1,-1,+1"
  std::string to_string() const;
  /// "pmp", safe for file names.
  std::string label() const;

  friend bool operator==(const SignVector&, const SignVector&) = default;
  friend std::strong_ordering operator<=>(const SignVector& a, const SignVector& b);

 private:
  int n_bodies_;
  std::vector<int> signs_;
};

struct OrbitClass {
  SignVector canonical;
  std::vector<SignVector> members;  // sorted, canonical first
};

SignVector negate(const SignVector& omega);

/// w*_j = w_{N-j}.
SignVector star(const SignVector& omega);

/// Closure of {omega} under negate and star, canonical = lexicographic minimum.
OrbitClass orbit(const SignVector& omega);

inline constexpr int kMaxEnumerationBodies = 24;
inline constexpr int kMaxCountBodies = 62;

/// Partition of all 2^(N-1) sign vectors into classes, ordered by canonical.
/// Supported for 3 <= N <= 24.
std::vector<OrbitClass> enumerate_classes(int n_bodies);

/// Same count as enumerate_classes(N).size() without materializing classes.
std::uint64_t count_classes_enumerated(int n_bodies);

/// 2^(N-3) + 2^floor((N-3)/2).
std::uint64_t count_formula(int n_bodies);

/// Number of fixed points of each element of the Klein group {1, negate, star,
/// negate*star} acting on the 2^(N-1) sign vectors, from the palindrome
/// structure of star.
struct FixedPointCounts {
  std::uint64_t identity;
  std::uint64_t negate;
  std::uint64_t star;
  std::uint64_t negate_star;
};
FixedPointCounts fixed_point_counts(int n_bodies);

/// Orbit count by Burnside's lemma over the Klein four-group.
std::uint64_t count_burnside(int n_bodies);

/// |w_j - w_{N-j}| = 2 (N odd) or 0 (N even) for j = 1..floor((N-1)/2).
bool hn_admissible(const SignVector& omega);

}  // namespace choreo
