#pragma once

// Integer points of a x^2 + b xy + c y^2 + d x + e y + f = 0 in the square
// |x|, |y| <= P, organised by the nine-way split on (a^2 + c^2, Delta, Theta).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqfree/int128.hpp"

namespace sqfree {

struct QuadInstance {
  i128 a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

  i128 delta() const;  // 4ac - b^2
  i128 theta() const;  // 4acf + ebd - ae^2 - cd^2 - fb^2
  i128 evaluate(i128 x, i128 y) const;
};

enum class QuadTag { I, II, III, IV, V, VI, VII, VIII, IX };
const char* to_string(QuadTag tag);

// Which of the twin conditions of cases V, VI and VII fired.
enum class QuadBranch { None, A, C };

struct QuadCase {
  QuadTag tag = QuadTag::IX;
  QuadBranch branch = QuadBranch::None;
  std::optional<i128> l;  // VI: 2ae - bd (A branch) or 2cd - be (C branch)
  std::optional<u128> k;  // VI: k^2 is the largest square dividing |l|
  std::optional<u128> m;  // IV: m^2 = -Delta
};

QuadCase classify(const QuadInstance& q);

struct QuadCount {
  u128 count;
  QuadCase qcase;
};

// Exact count through the case-specific fast path. With verify set, the
// result is checked against brute force and a std::logic_error is thrown on
// disagreement.
QuadCount count_solutions(const QuadInstance& q, i128 P, bool verify = false);

// The solutions themselves, sorted by (x, y).
std::vector<std::pair<i128, i128>> list_solutions(const QuadInstance& q, i128 P);

u128 count_solutions_bruteforce(const QuadInstance& q, i128 P);

// Count together with the bound it is expected to respect.
struct BoundedCount {
  u128 count;
  double bound;
  bool within_bound() const { return static_cast<double>(count) <= bound; }
};

// #{x, y >= 1 : a x^2 + b y^2 = n}; bound 2 d(n).
BoundedCount count_Q(u128 n, u128 a, u128 b);
// #{x, y >= 1 : a x^2 - b y^2 = n, a x^2 <= m}; bound 2 d(n) (1 + ln m).
BoundedCount count_R(u128 n, u128 a, u128 b, u128 m);

// #{y in [-P, P] : n y + b is a perfect square}, walking square roots by residue class mod n.
u128 count_S(i128 P, i128 n, i128 b);
u128 count_S_bruteforce(i128 P, i128 n, i128 b);
// The (y, z) pairs with n y + b = z^2, z >= 0, |y| <= P, ascending in z.
std::vector<std::pair<i128, i128>> squares_in_progression(i128 P, i128 n, i128 b);

}  // namespace sqfree
