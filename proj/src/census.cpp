#include "choreo/census.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>

namespace choreo {

namespace {

void require_bodies(int n_bodies, int max_bodies) {
  if (n_bodies < 3 || n_bodies > max_bodies) {
    throw std::out_of_range("number of bodies " + std::to_string(n_bodies) +
                            " outside supported range [3, " + std::to_string(max_bodies) + "]");
  }
}

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

// Reverses the low `bits` bits: the mask form of star.
std::uint64_t reverse_bits(std::uint64_t mask, int bits) {
  std::uint64_t out = 0;
  for (int i = 0; i < bits; ++i) {
    if (mask & (std::uint64_t{1} << i)) out |= std::uint64_t{1} << (bits - 1 - i);
  }
  return out;
}

// Bit order in which the integer order equals the lexicographic order of the
// sign vector (w_1 most significant, +1 < -1).
std::uint64_t mask_to_lex(std::uint64_t mask, int bits) { return reverse_bits(mask, bits); }

std::array<std::uint64_t, 4> orbit_masks(std::uint64_t mask, int bits) {
  const std::uint64_t all = pow2(bits) - 1;
  const std::uint64_t starred = reverse_bits(mask, bits);
  return {mask, mask ^ all, starred, starred ^ all};
}

}  // namespace

SignVector::SignVector(int n_bodies, std::vector<int> signs)
    : n_bodies_(n_bodies), signs_(std::move(signs)) {
  if (n_bodies_ < 3 || n_bodies_ > kMaxCountBodies + 1) {
    throw std::invalid_argument("sign vector needs 3 <= N <= " + std::to_string(kMaxCountBodies + 1));
  }
  if (static_cast<int>(signs_.size()) != n_bodies_ - 1) {
    throw std::invalid_argument("sign vector for N=" + std::to_string(n_bodies_) + " must have " +
                                std::to_string(n_bodies_ - 1) + " entries, got " +
                                std::to_string(signs_.size()));
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("sign vector entries must be +1 or -1");
  }
}

SignVector SignVector::from_mask(int n_bodies, std::uint64_t minus_mask) {
  std::vector<int> signs(static_cast<std::size_t>(std::max(n_bodies - 1, 0)));
  for (std::size_t i = 0; i < signs.size(); ++i) {
    signs[i] = (minus_mask >> i) & 1U ? -1 : 1;
  }
  return SignVector(n_bodies, std::move(signs));
}

SignVector SignVector::parse(int n_bodies, std::string_view text) {
  std::vector<int> signs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token == "+1" || token == "1" || token == "+") {
      signs.push_back(1);
    } else if (token == "-1" || token == "-") {
      signs.push_back(-1);
    } else {
      throw std::invalid_argument("bad sign token '" + std::string(token) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return SignVector(n_bodies, std::move(signs));
}

int SignVector::sign(int j) const {
  if (j < 1 || j > size()) throw std::out_of_range("sign index out of range");
  return signs_[static_cast<std::size_t>(j - 1)];
}

std::uint64_t SignVector::minus_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    if (signs_[i] < 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

std::uint64_t SignVector::lex_key() const { return mask_to_lex(minus_mask(), size()); }

std::string SignVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    if (i) out += ',';
    out += signs_[i] > 0 ? "+1" : "-1";
  }
  return out;
}

std::string SignVector::label() const {
  std::string out;
  for (int s : signs_) out += s > 0 ? 'p' : 'm';
  return out;
}

std::strong_ordering operator<=>(const SignVector& a, const SignVector& b) {
  if (auto c = a.n_bodies_ <=> b.n_bodies_; c != 0) return c;
  return a.lex_key() <=> b.lex_key();
}

SignVector negate(const SignVector& omega) {
  std::vector<int> out = omega.signs();
  for (int& s : out) s = -s;
  return SignVector(omega.n_bodies(), std::move(out));
}

SignVector star(const SignVector& omega) {
  std::vector<int> out(omega.signs().rbegin(), omega.signs().rend());
  return SignVector(omega.n_bodies(), std::move(out));
}

OrbitClass orbit(const SignVector& omega) {
  std::vector<SignVector> members{omega, negate(omega), star(omega), negate(star(omega))};
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  SignVector canonical = members.front();
  return OrbitClass{std::move(canonical), std::move(members)};
}

std::vector<OrbitClass> enumerate_classes(int n_bodies) {
  require_bodies(n_bodies, kMaxEnumerationBodies);
  const int bits = n_bodies - 1;
  std::vector<OrbitClass> classes;
  // Walk masks in lexicographic order of the sign vector so classes come out
  // sorted by canonical representative.
  for (std::uint64_t lex = 0; lex < pow2(bits); ++lex) {
    const std::uint64_t mask = reverse_bits(lex, bits);
    const auto images = orbit_masks(mask, bits);
    bool is_min = true;
    for (std::uint64_t m : images) {
      if (mask_to_lex(m, bits) < lex) {
        is_min = false;
        break;
      }
    }
    if (is_min) classes.push_back(orbit(SignVector::from_mask(n_bodies, mask)));
  }
  return classes;
}

std::uint64_t count_classes_enumerated(int n_bodies) {
  require_bodies(n_bodies, kMaxEnumerationBodies);
  const int bits = n_bodies - 1;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < pow2(bits); ++mask) {
    const auto images = orbit_masks(mask, bits);
    if (*std::min_element(images.begin(), images.end()) == mask) ++count;
  }
  return count;
}

std::uint64_t count_formula(int n_bodies) {
  require_bodies(n_bodies, kMaxCountBodies);
  return pow2(n_bodies - 3) + pow2((n_bodies - 3) / 2);
}

FixedPointCounts fixed_point_counts(int n_bodies) {
  require_bodies(n_bodies, kMaxCountBodies);
  const int len = n_bodies - 1;
  FixedPointCounts fixed{};
  fixed.identity = pow2(len);
  fixed.negate = 0;
  // Palindromes of length N-1 are free on the first ceil((N-1)/2) entries.
  fixed.star = pow2((len + 1) / 2);
  // w_j = -w_{N-j}: impossible on the middle entry when N-1 is odd.
  fixed.negate_star = (len % 2 == 0) ? pow2(len / 2) : 0;
  return fixed;
}

std::uint64_t count_burnside(int n_bodies) {
  const FixedPointCounts f = fixed_point_counts(n_bodies);
  return (f.identity + f.negate + f.star + f.negate_star) / 4;
}

bool hn_admissible(const SignVector& omega) {
  const int n = omega.n_bodies();
  const int required = (n % 2 == 1) ? 2 : 0;
  for (int j = 1; j <= (n - 1) / 2; ++j) {
    if (std::abs(omega.sign(j) - omega.sign(n - j)) != required) return false;
  }
  return true;
}

}  // namespace choreo
