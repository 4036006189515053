#include "sqfree/int128.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Guard: return "guard";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Overflow: return "overflow";
  }
  return "unknown";
}

i128 checked_pow(i128 base, unsigned exp) {
  i128 result = 1;
  while (exp > 0) {
    if (exp & 1u) result = checked_mul(result, base);
    exp >>= 1;
    if (exp > 0) base = checked_mul(base, base);
  }
  return result;
}

std::uint64_t isqrt64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u128 isqrt(u128 n) {
  if (n < (static_cast<u128>(1) << 64)) return isqrt64(static_cast<std::uint64_t>(n));
  // Newton from a power-of-two over-estimate decreases monotonically to floor(sqrt n).
  int bits = 0;
  for (u128 t = n; t != 0; t >>= 1) ++bits;
  u128 x = static_cast<u128>(1) << ((bits + 1) / 2);
  for (;;) {
    const u128 y = (x + n / x) >> 1;
    if (y >= x) break;
    x = y;
  }
  return x;
}

u128 gcd(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(uabs(v));
  return to_string(static_cast<u128>(v));
}

i128 parse_i128(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ParseError("expected digits", i);
  u128 magnitude = 0;
  const u128 limit = static_cast<u128>(kI128Max) + (negative ? 1 : 0);
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw ParseError(std::string("unexpected character '") + c + "'", i);
    const u128 digit = static_cast<u128>(c - '0');
    if (magnitude > (limit - digit) / 10) throw ParseError("integer out of 128-bit range", i);
    magnitude = magnitude * 10 + digit;
  }
  if (negative) return static_cast<i128>(static_cast<u128>(0) - magnitude);
  return static_cast<i128>(magnitude);
}

}  // namespace sqfree
