#include "sqfree/arith.hpp"

#include <algorithm>
#include <array>

namespace sqfree {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(kTrialLimit);
  return primes;
}

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1u) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// a*b mod m for m < 2^127 without a wider type.
u128 mulmod128(u128 a, u128 b, u128 m) {
  if (m <= (static_cast<u128>(1) << 64)) return (a % m) * (b % m) % m;
  a %= m;
  b %= m;
  u128 r = 0;
  while (b > 0) {
    if (b & 1u) {
      r += a;
      if (r >= m) r -= m;
    }
    a <<= 1;
    if (a >= m) a -= m;
    b >>= 1;
  }
  return r;
}

u128 powmod128(u128 a, u128 e, u128 m) {
  u128 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1u) r = mulmod128(r, a, m);
    a = mulmod128(a, a, m);
    e >>= 1;
  }
  return r;
}

bool strong_probable_prime(u128 n, u128 base) {
  u128 d = n - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  u128 x = powmod128(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod128(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Pollard-Brent with f(x) = x^2 + c, c = 1, 2, ... in order.
u128 find_factor(u128 n) {
  if ((n & 1u) == 0) return 2;
  for (u128 c = 1;; ++c) {
    u128 y = 2, x = 2, q = 1, g = 1, ys = 2;
    const unsigned m = 128;
    for (unsigned r = 1; g == 1; r <<= 1) {
      x = y;
      for (unsigned i = 0; i < r; ++i) y = (mulmod128(y, y, n) + c) % n;
      for (unsigned k = 0; k < r && g == 1; k += m) {
        ys = y;
        const unsigned lim = std::min(m, r - k);
        for (unsigned i = 0; i < lim; ++i) {
          y = (mulmod128(y, y, n) + c) % n;
          q = mulmod128(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = (mulmod128(ys, ys, n) + c) % n;
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_into(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u128 r = isqrt(n);
  if (r * r == n) {
    split_into(r, out);
    split_into(r, out);
    return;
  }
  const u128 f = find_factor(n);
  split_into(f, out);
  split_into(n / f, out);
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::int8_t> moebius_table(std::uint64_t limit) {
  std::vector<std::int8_t> mu(limit + 1, 1);
  std::vector<std::uint64_t> primes;
  std::vector<bool> composite(limit + 1, false);
  mu[0] = 0;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (const std::uint64_t p : primes) {
      const std::uint64_t ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return mu;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const auto p : bases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  for (const auto a : bases) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(u128 n) {
  if (n < (static_cast<u128>(1) << 64)) return is_prime_u64(static_cast<std::uint64_t>(n));
  static constexpr std::array<unsigned, 20> bases{2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  for (const auto p : bases) {
    if (n % p == 0) return false;
  }
  for (const auto a : bases) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

Factorization factorize(u128 n) {
  if (n == 0) throw PreconditionError("factorize: zero has no factorization");
  Factorization result;
  for (const std::uint64_t p : trial_primes()) {
    if (static_cast<u128>(p) * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    result.push_back({p, e});
  }
  if (n == 1) return result;
  const std::uint64_t last = trial_primes().back();
  if (n <= static_cast<u128>(last) * last || is_prime(n)) {
    result.push_back({n, 1});
    return result;
  }
  std::vector<u128> parts;
  split_into(n, parts);
  std::sort(parts.begin(), parts.end());
  for (const u128 q : parts) {
    if (!result.empty() && result.back().prime == q) {
      ++result.back().exponent;
    } else {
      result.push_back({q, 1});
    }
  }
  return result;
}

int moebius(u128 n) {
  const auto f = factorize(n);
  for (const auto& pe : f) {
    if (pe.exponent > 1) return 0;
  }
  return (f.size() % 2 == 0) ? 1 : -1;
}

u128 divisor_count(u128 n) {
  u128 d = 1;
  for (const auto& pe : factorize(n)) d *= pe.exponent + 1;
  return d;
}

u128 largest_square_divisor(u128 n) {
  u128 k = 1;
  for (const auto& pe : factorize(n)) {
    for (unsigned i = 0; i < pe.exponent / 2; ++i) k *= pe.prime;
  }
  return k;
}

std::vector<u128> divisors(u128 n) {
  std::vector<u128> out{1};
  for (const auto& pe : factorize(n)) {
    const std::size_t base = out.size();
    u128 power = 1;
    for (unsigned e = 1; e <= pe.exponent; ++e) {
      power *= pe.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_squarefree(i128 value) {
  u128 n = uabs(value);
  if (n == 0) return false;
  // Strip primes up to cbrt(n). What remains has at most two prime factors,
  // so it is squarefree unless it is a perfect square.
  for (const std::uint64_t p : trial_primes()) {
    const u128 pp = static_cast<u128>(p) * p;
    if (pp * p > n) {
      if (pp > n) return true;
      const u128 r = isqrt(n);
      return r * r != n;
    }
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return false;
  }
  // n has no prime factor <= 10^6 and n > 10^18.
  for (const auto& pe : factorize(n)) {
    if (pe.exponent > 1) return false;
  }
  return true;
}

}  // namespace sqfree
