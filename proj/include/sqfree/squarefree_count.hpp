#pragma once

// N_P(box) = #{x in box : P(x) squarefree}, counted two independent ways,
// together with the predicted main term 2^s (prod P_j) S_P.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqfree/enumeration.hpp"
#include "sqfree/int128.hpp"
#include "sqfree/local_density.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree {

struct CountConfig {
  u128 max_points = 100'000'000;
  // The sieve runs over d <= sqrt(max |P(x)|); refuse larger value ranges.
  u128 max_value = 100'000'000'000'000;
  unsigned threads = 1;

  EnumerationConfig enumeration() const { return {max_points, threads}; }
  DensityConfig density() const { return {1'000'000'000, threads}; }
};

enum class CountMethod { Factorization, MoebiusSieve };
const char* to_string(CountMethod m);

struct CountReport {
  Box box;
  CountMethod method = CountMethod::Factorization;
  u128 exact_count = 0;
  u128 total_points = 0;
  u128 zero_value_points = 0;
  // Present once a singular series has been attached.
  std::optional<std::uint64_t> cutoff{};
  std::optional<UnitFixed> series{};
  long double predicted = 0;
  long double relative_error = 0;
  bool exact_match = false;
};

// Evaluates every point and tests each value for squarefreeness.
CountReport count_exact(const Polynomial& p, const Box& box, const CountConfig& config = {});

// mu(n)^2 = sum_{d^2 | n} mu(d), applied to the sorted value table.
CountReport count_sieve(const Polynomial& p, const Box& box, const CountConfig& config = {});

// count_exact plus the predicted main term from the series truncated at cutoff.
CountReport asymptotic_report(const Polynomial& p, const Box& box, std::uint64_t cutoff,
                              const CountConfig& config = {});

std::string to_json(const CountReport& report);

// "n,R" rows of the value histogram.
std::string histogram_csv(const ValueTable& table);

struct Theorem13Row {
  Box box;
  u128 count = 0;
  u128 total_points = 0;
  long double density = 0;
  // min over prime prefixes q of T(q) prod_j (1 + D(q)^2 / (2P_j + 1)), where T is
  // the truncated product and D the product of the primes up to q.
  long double upper_bound = 0;
  bool within_bound = false;
};

struct Theorem13Table {
  Polynomial polynomial;
  std::uint64_t cutoff;
  UnitFixed series;
  std::vector<std::uint64_t> zero_factor_primes;
  std::vector<Theorem13Row> rows;
};

// Requires zero_factor_primes nonempty or the truncated series below threshold.
Theorem13Table theorem13_experiment(const Polynomial& p, const std::vector<Box>& boxes, std::uint64_t cutoff,
                                    double threshold = 1e-3, const CountConfig& config = {});

std::string to_json(const Theorem13Table& table);

// Q = P for k = 3 and the integer nearest to P^(3/4) for k = 4.
i128 mixed_box_height(i128 P, unsigned k);

struct BandCount {
  double lower;
  double upper;  // infinity for the last band
  bool empty;
  u128 count;  // points with p^2 | P(x) for some prime p in (lower, upper]
};

struct BandDiagnostic {
  std::uint64_t X;
  u128 N0;  // nonzero values with no p^2 | P(x) for p <= X
  std::vector<BandCount> bands;
};

struct Theorem14Row {
  i128 P;
  i128 Q;
  u128 count;
  long double predicted;
  long double relative_error;
  std::optional<BandDiagnostic> diagnostic;
};

struct Theorem14Table {
  Polynomial polynomial;
  std::uint64_t cutoff;
  UnitFixed series;
  std::vector<Theorem14Row> rows;
};

Theorem14Table theorem14_experiment(i128 c, unsigned k, const Polynomial& cstar, const std::vector<i128>& P_values,
                                    std::uint64_t cutoff, bool with_diagnostic = false,
                                    const CountConfig& config = {});

// "P,Q,N_exact,predicted,rel_error"
std::string theorem14_csv(const Theorem14Table& table);
std::string to_json(const Theorem14Table& table);

// Decimal rendering used in every report.
std::string decimal(long double v, int significant = 12);

}  // namespace sqfree
