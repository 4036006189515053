#pragma once

#include <cstdint>
#include <string>

#include "sqfree/int128.hpp"

namespace sqfree {

// Unsigned fixed-point number in [0, 1] with 64 fractional bits.
// Every operation rounds to nearest once; callers count operations to bound
// the accumulated error (at most 2^-65 per rounding).
class UnitFixed {
 public:
  static constexpr unsigned kFractionBits = 64;
  static constexpr u128 kOne = static_cast<u128>(1) << kFractionBits;

  static UnitFixed one() { return UnitFixed(kOne); }
  static UnitFixed zero() { return UnitFixed(0); }
  // num/den rounded to nearest; requires num <= den, 0 < den < 2^127.
  static UnitFixed ratio(u128 num, u128 den);

  u128 raw() const { return raw_; }
  bool is_zero() const { return raw_ == 0; }
  double to_double() const;
  // Decimal expansion truncated to `digits` fractional digits.
  std::string to_decimal(unsigned digits = 20) const;

  friend UnitFixed operator*(UnitFixed a, UnitFixed b);
  friend auto operator<=>(UnitFixed, UnitFixed) = default;

 private:
  explicit UnitFixed(u128 raw) : raw_(raw) {}
  u128 raw_;
};

}  // namespace sqfree
