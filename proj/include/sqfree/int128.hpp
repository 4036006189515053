#pragma once

// Exact 128-bit integer helpers. All polynomial values, counts and moduli
// flow through i128; overflow is always reported, never wrapped.

#include <cstdint>
#include <string>
#include <string_view>

#include "sqfree/error.hpp"

namespace sqfree {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr i128 kI128Max = static_cast<i128>(~static_cast<u128>(0) >> 1);
inline constexpr i128 kI128Min = -kI128Max - 1;

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit overflow in addition");
  return r;
}

inline i128 checked_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit overflow in subtraction");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit overflow in multiplication");
  return r;
}

i128 checked_pow(i128 base, unsigned exp);

inline u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v); }

// Floor of the square root; exact for the whole unsigned range.
u128 isqrt(u128 n);
std::uint64_t isqrt64(std::uint64_t n);

inline bool is_perfect_square(i128 n) {
  if (n < 0) return false;
  const u128 r = isqrt(static_cast<u128>(n));
  return r * r == static_cast<u128>(n);
}

// Floor division and non-negative remainder.
inline i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline i128 mod_floor(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

u128 gcd(u128 a, u128 b);

std::string to_string(i128 v);
std::string to_string(u128 v);

// Parses an optionally signed decimal integer; throws ParseError.
i128 parse_i128(std::string_view text);

}  // namespace sqfree
