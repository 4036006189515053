#pragma once

// Local densities rho_P(d) = #{x in (Z/dZ)^s : P(x) = 0 mod d}, the truncated
// singular series prod_p (1 - rho_P(p^2)/p^(2s)), and fixed square divisors.

#include <cstdint>
#include <string>
#include <vector>

#include "sqfree/fixed_point.hpp"
#include "sqfree/int128.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree {

struct DensityConfig {
  // Bound on residue vectors enumerated by any single density computation.
  std::uint64_t max_points = 1'000'000'000;
  unsigned threads = 1;
};

enum class DensityMethod { BruteForce, HenselCRT };
const char* to_string(DensityMethod m);

struct LocalDensity {
  u128 modulus;
  u128 count;
  DensityMethod method;
};

// Exhaustive count over (Z/dZ)^s.
LocalDensity rho_bruteforce(const Polynomial& p, u128 d, const DensityConfig& config = {});

// Factor d, count each prime power by lifting roots mod p level by level,
// and multiply the prime-power counts.
LocalDensity rho(const Polynomial& p, u128 d, const DensityConfig& config = {});

// rho(p^2) for a prime p by splitting P into variable-disjoint additive blocks,
// convolving per-block value counts mod p and lifting: a nonsingular root mod p
// has p^(s-1) lifts, a singular root has p^s lifts or none.
u128 rho_prime_square(const Polynomial& p, std::uint64_t prime, const DensityConfig& config = {});

// Primes q <= prime_bound with rho(q^2) = q^(2s), i.e. q^2 divides every value.
std::vector<std::uint64_t> fixed_square_divisor_primes(const Polynomial& p, std::uint64_t prime_bound,
                                                       const DensityConfig& config = {});

struct PrimeFactor {
  std::uint64_t prime;
  u128 rho_p2;
};

struct SingularSeriesReport {
  std::uint64_t cutoff;
  std::size_t num_vars;
  UnitFixed truncated_value = UnitFixed::one();
  std::vector<std::uint64_t> zero_factor_primes;
  std::vector<PrimeFactor> factors;  // ascending primes
  // Heuristic convergence indicator A/(cutoff-1), A = 2 max_{p<=cutoff} rho(p^2)/p^(2s-2).
  double tail_bound = 0.0;
  // Upper bound on |truncated_value - exact truncated product| from rounding.
  double rounding_error = 0.0;
};

SingularSeriesReport singular_series(const Polynomial& p, std::uint64_t cutoff, const DensityConfig& config = {});

// The report in its JSON wire format.
std::string to_json(const SingularSeriesReport& report);

// Truncated product over primes <= cutoff reusing an existing report.
UnitFixed truncated_product(const SingularSeriesReport& report, std::uint64_t cutoff);

// c x1^k + C*(x2..xs). cstar must not involve x1, must be a cubic form in at
// least two further variables and must not be a (rational) multiple of a cube
// of a linear form.
Polynomial mixed_power_polynomial(i128 c, unsigned k, const Polynomial& cstar);

struct Lemma25Row {
  std::uint64_t prime;
  u128 rho_p2;
  double ratio;  // rho(p^2) / p^(2s-2)
};

struct Lemma25Table {
  Polynomial polynomial;
  std::vector<Lemma25Row> rows;
  double max_ratio = 0.0;
};

Lemma25Table lemma25_bound_check(i128 c, unsigned k, const Polynomial& cstar, std::uint64_t prime_bound,
                                 const DensityConfig& config = {});

}  // namespace sqfree
