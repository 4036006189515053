#pragma once

// Collision counts M(P) = #{C(x) = C(X)} and L(P) for the mixed box, both as
// sum_n R(n)^2 over the value histogram, and log-log exponent fits.

#include <string>
#include <utility>
#include <vector>

#include "sqfree/enumeration.hpp"
#include "sqfree/int128.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree {

struct ValueHistogram {
  Box box;
  ValueTable table;

  u128 total_points() const { return table.total_points; }
  u128 R(i128 n) const { return table.multiplicity(n); }
  u128 sum_of_squares() const;
  // R(-n) == R(n) for every n.
  bool is_symmetric() const;
};

ValueHistogram value_histogram(const Polynomial& p, const Box& box, const EnumerationConfig& config = {});

struct CollisionCount {
  i128 P;
  Box box;
  u128 count;
};

// M(P) over [-P, P]^s. Forms a (b.x)^3 are refused unless allow_degenerate is set.
CollisionCount collision_count_M(const Polynomial& p, i128 P, bool allow_degenerate = false,
                                 const EnumerationConfig& config = {});

// L(P) for c x1^k + C* over the box (Q, P, ..., P).
CollisionCount collision_count_L(i128 c, unsigned k, const Polynomial& cstar, i128 P,
                                 const EnumerationConfig& config = {});

struct ExponentFit {
  std::vector<std::pair<i128, u128>> samples;
  double slope;
  double reference;
  double excess() const { return slope - reference; }
};

ExponentFit exponent_fit(const std::vector<std::pair<i128, u128>>& samples, double reference);

std::string to_json(const ExponentFit& fit);
// "P,count,log_slope_so_far"; the slope column is empty for the first sample.
std::string exponent_csv(const std::vector<std::pair<i128, u128>>& samples);

}  // namespace sqfree
