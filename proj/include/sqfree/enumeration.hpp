#pragma once

// Exact evaluation of a polynomial at every lattice point of a box.
//
// The box is split into slices on the first coordinate; slices are handed to
// worker threads and their partial results are merged in slice order, so
// output never depends on the thread count.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sqfree/int128.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree {

struct EnumerationConfig {
  u128 max_points = 100'000'000;
  unsigned threads = 1;
};

class BoxEvaluator {
 public:
  BoxEvaluator(const Polynomial& p, const Box& box);

  const Box& box() const { return box_; }
  // sum |c| prod P_j^e_j, an upper bound for |P(x)| on the box (saturates at 2^127 - 1).
  i128 max_abs_bound() const { return bound_; }
  std::size_t slice_count() const { return static_cast<std::size_t>(2 * box_.bound(0) + 1); }

  // Calls visit(value) for every point whose first coordinate is
  // -P_1 + slice, in odometer order over the remaining coordinates.
  void for_each_in_slice(std::size_t slice, const std::function<void(i128)>& visit) const;

 private:
  i128 value_at(const std::vector<i128>& offsets) const;

  struct Term {
    i128 coeff;
    std::vector<std::pair<std::size_t, unsigned>> factors;
  };
  Box box_;
  std::vector<Term> terms_;
  // powers_[j][x + P_j][e] = x^e
  std::vector<std::vector<std::vector<i128>>> powers_;
  i128 bound_ = 0;
  bool needs_checks_ = false;
};

// Sorted (value, multiplicity) pairs over every point of the box.
struct ValueTable {
  std::vector<std::pair<i128, u128>> entries;
  u128 total_points = 0;

  u128 multiplicity(i128 value) const;
};

ValueTable build_value_table(const Polynomial& p, const Box& box, const EnumerationConfig& config);

// Throws GuardError if the box is larger than config.max_points.
void check_box_guard(const Box& box, const EnumerationConfig& config);

}  // namespace sqfree
