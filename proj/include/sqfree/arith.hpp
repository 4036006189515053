#pragma once

// Elementary multiplicative number theory: prime sieves, deterministic
// factorization, Moebius values, divisor counts and the squarefree test.

#include <cstdint>
#include <utility>
#include <vector>

#include "sqfree/int128.hpp"

namespace sqfree {

struct PrimePower {
  u128 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;  // ascending primes

// Sieve of Eratosthenes; all primes <= limit in ascending order.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Moebius values mu(0..limit) by a linear sieve; mu(0) = 0.
std::vector<std::int8_t> moebius_table(std::uint64_t limit);

// Deterministic Miller-Rabin for n < 2^64.
bool is_prime_u64(std::uint64_t n);

// Primality for the full 128-bit range. Deterministic below 2^64; above that
// a strong probable-prime test with the first 20 prime bases.
bool is_prime(u128 n);

// Trial division to 10^6, then Pollard-Brent splitting with a fixed
// parameter schedule. n must be >= 1; factorize(1) is empty.
Factorization factorize(u128 n);

// Multiplicative helpers built on factorize.
int moebius(u128 n);
u128 divisor_count(u128 n);
u128 largest_square_divisor(u128 n);  // k with k^2 | n maximal
std::vector<u128> divisors(u128 n);   // ascending

// mu(|n|)^2 with the convention mu(0) = 0.
bool is_squarefree(i128 n);

}  // namespace sqfree
