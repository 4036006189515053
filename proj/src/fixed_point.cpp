#include "sqfree/fixed_point.hpp"

#include <cmath>

namespace sqfree {

UnitFixed UnitFixed::ratio(u128 num, u128 den) {
  if (den == 0 || num > den) throw PreconditionError("UnitFixed::ratio needs 0 <= num <= den, den > 0");
  if (den >> 127) throw OverflowError("UnitFixed::ratio denominator exceeds 2^127");
  if (num == den) return one();
  // Binary long division, one quotient bit per step; rem < den < 2^127 so
  // the shift never overflows.
  u128 rem = num;
  u128 q = 0;
  for (unsigned i = 0; i < kFractionBits; ++i) {
    rem <<= 1;
    q <<= 1;
    if (rem >= den) {
      rem -= den;
      q |= 1;
    }
  }
  // Round half up on the remainder.
  if (rem >= den - rem) ++q;
  return UnitFixed(q);
}

UnitFixed operator*(UnitFixed a, UnitFixed b) {
  if (a.raw_ == UnitFixed::kOne) return b;
  if (b.raw_ == UnitFixed::kOne) return a;
  // Both < 2^64 here, so the product fits.
  const u128 prod = a.raw_ * b.raw_;
  u128 q = prod >> UnitFixed::kFractionBits;
  if ((prod >> (UnitFixed::kFractionBits - 1)) & 1u) ++q;
  return UnitFixed(q);
}

double UnitFixed::to_double() const { return std::ldexp(static_cast<double>(raw_), -static_cast<int>(kFractionBits)); }

std::string UnitFixed::to_decimal(unsigned digits) const {
  if (raw_ == kOne) return "1." + std::string(digits, '0');
  std::string out = "0.";
  u128 frac = raw_;
  for (unsigned i = 0; i < digits; ++i) {
    frac *= 10;
    out.push_back(static_cast<char>('0' + static_cast<int>(frac >> kFractionBits)));
    frac &= kOne - 1;
  }
  return out;
}

}  // namespace sqfree
