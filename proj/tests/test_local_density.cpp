#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sqfree/arith.hpp"
#include "sqfree/error.hpp"
#include "sqfree/local_density.hpp"

using namespace sqfree;

TEST_CASE("rho_bruteforce examples") {
  CHECK(rho_bruteforce(parse_polynomial("x1", 2), 4).count == 4);
  CHECK(rho_bruteforce(parse_polynomial("x1*x2"), 4).count == oracle::rho(parse_polynomial("x1*x2"), 4));
  CHECK(rho_bruteforce(parse_polynomial("x1*x2"), 4).count == 8);
  CHECK(rho_bruteforce(parse_polynomial("x1^2 + x2^2"), 9).count == oracle::rho(parse_polynomial("x1^2 + x2^2"), 9));
  CHECK(rho_bruteforce(parse_polynomial("x1^2 + x2^2"), 9).count == 9);
  CHECK(rho_bruteforce(parse_polynomial("x1"), 1).count == 1);

  DensityConfig tiny;
  tiny.max_points = 100;
  CHECK_THROWS_AS(rho_bruteforce(parse_polynomial("x1*x2*x3"), 5, tiny), GuardError);
}

TEST_CASE("rho by lifting matches the exhaustive oracle") {
  const char* corpus[] = {"x1",          "x1*x2",        "x1^2 + x2^2",  "x1^3 + 2*x2^3", "x1^2",
                          "x1^2 - 2",    "9*x1*x2 + 9",  "x1^3 - x1",    "x1^2*x2 + x2^2*x3",
                          "x1^4 + x2^3 + x2^2*x3 + x3^3", "12*x1^2 + 6", "x1*x2 - x3^2"};
  for (const char* text : corpus) {
    const auto p = parse_polynomial(text);
    CAPTURE(text);
    for (int d = 1; d <= (p.num_vars() == 3 ? 16 : 36); ++d) {
      CAPTURE(d);
      const auto r = rho(p, static_cast<u128>(d));
      CHECK(r.count == oracle::rho(p, d));
      CHECK(r.method == DensityMethod::HenselCRT);
    }
  }
  CHECK(rho(parse_polynomial("x1", 2), 36).count == 36);
}

TEST_CASE("rho is multiplicative on coprime moduli and respects the trivial bound") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(2, 300);
  const auto p = parse_polynomial("x1^3 + 2*x2^3 + 5");
  for (int trial = 0; trial < 100;) {
    const u128 a = static_cast<u128>(pick(rng)), b = static_cast<u128>(pick(rng));
    if (gcd(a, b) != 1) continue;
    ++trial;
    const u128 whole = rho(p, a * b).count;
    CHECK(whole == rho(p, a).count * rho(p, b).count);
    CHECK(whole <= a * a * b * b);
  }
}

TEST_CASE("rho_prime_square agrees with exhaustive counts") {
  const char* corpus[] = {"x1^3 + x2^3 + x2*x3^2", "x1*x2", "x1 + x2^2", "4*x1", "x1^4 + x2^3 + x2^2*x3 + x3^3",
                          "2*x1^2 + 2*x1 + 2*x2^2 + 2*x2 + 4", "x1*x2 + x3*x4"};
  for (const char* text : corpus) {
    const auto p = parse_polynomial(text);
    CAPTURE(text);
    for (std::uint64_t q : {2, 3, 5, 7}) {
      if (std::pow(q * q, p.num_vars()) > 2e6) continue;
      CHECK(rho_prime_square(p, q) == oracle::rho(p, static_cast<i128>(q * q)));
    }
  }
}

TEST_CASE("fixed_square_divisor_primes") {
  CHECK(fixed_square_divisor_primes(parse_polynomial("4*x1", 2), 10) == std::vector<std::uint64_t>{2});
  CHECK(fixed_square_divisor_primes(parse_polynomial("x1", 2), 10).empty());
  const auto p = parse_polynomial("9*x1*x2 + 9");
  CHECK(oracle::rho(p, 9) == 81);
  CHECK(fixed_square_divisor_primes(p, 10) == std::vector<std::uint64_t>{3});
}

TEST_CASE("singular series for x1 approaches 6/pi^2") {
  const auto report = singular_series(parse_polynomial("x1"), 100'000);
  const double target = 6.0 / (std::numbers::pi * std::numbers::pi);
  CHECK(std::fabs(report.truncated_value.to_double() - target) < 1e-4);
  CHECK(report.zero_factor_primes.empty());
  // Independent product of (1 - 1/p^2) in long double.
  long double product = 1;
  for (auto q : primes_up_to(100'000)) product *= 1 - 1.0L / (static_cast<long double>(q) * q);
  CHECK(std::fabs(static_cast<double>(product) - report.truncated_value.to_double()) < 1e-12);
}

TEST_CASE("singular series with a fixed square divisor vanishes") {
  const auto report = singular_series(parse_polynomial("4*x1", 2), 50);
  CHECK(report.truncated_value.is_zero());
  CHECK(report.zero_factor_primes == std::vector<std::uint64_t>{2});
}

TEST_CASE("singular series for x1*x2 matches the closed-form factors") {
  const auto p = parse_polynomial("x1*x2");
  const auto report = singular_series(p, 1000);
  long double product = 1;
  for (const auto& f : report.factors) {
    const long double q = static_cast<long double>(f.prime);
    if (f.prime <= 20) CHECK(f.rho_p2 == oracle::rho(p, static_cast<i128>(f.prime * f.prime)));
    CHECK(f.rho_p2 == 3 * f.prime * f.prime - 2 * f.prime);
    product *= 1 - (3 * q * q - 2 * q) / (q * q * q * q);
  }
  CHECK(std::fabs(static_cast<double>(product) - report.truncated_value.to_double()) < 1e-12);
}

TEST_CASE("truncated series is non-increasing in the cutoff with factors in [0, 1]") {
  const auto p = parse_polynomial("x1^3 + 2*x2^3 + 1");
  const auto report = singular_series(p, 300);
  UnitFixed previous = UnitFixed::one();
  for (std::uint64_t cutoff = 2; cutoff <= 300; cutoff += 7) {
    const auto value = truncated_product(report, cutoff);
    CHECK(value <= previous);
    previous = value;
  }
  for (const auto& f : report.factors) CHECK(f.rho_p2 <= f.prime * f.prime * f.prime * f.prime);
}

TEST_CASE("series JSON report") {
  const auto j = nlohmann::json::parse(to_json(singular_series(parse_polynomial("4*x1", 2), 5)));
  CHECK(j["cutoff"] == 5);
  CHECK(j["value"].get<std::string>().rfind("0.000", 0) == 0);
  CHECK(j["zero_factor_primes"] == nlohmann::json::array({2}));
  CHECK(j["factors"].size() == 3);
  CHECK(j["factors"][0]["p"] == 2);
  CHECK(j["factors"][0]["rho_p2"] == 16);
  CHECK(j["tail_bound"].is_string());
  CHECK(j["tail_bound_is_heuristic"] == true);
}

TEST_CASE("mixed power polynomial and the rho(p^2) ratio table") {
  const auto t = lemma25_bound_check(1, 3, parse_polynomial("x2^3 + x2*x3^2", 3), 13);
  CHECK(t.rows.size() == 6);
  for (const auto& row : t.rows) {
    CHECK(std::isfinite(row.ratio));
    CHECK(row.rho_p2 == oracle::rho(t.polynomial, static_cast<i128>(row.prime * row.prime)));
  }
  const auto t4 = lemma25_bound_check(1, 4, parse_polynomial("x2^3 + x2^2*x3 + x3^3", 3), 13);
  CHECK(t4.max_ratio > 0);
  CHECK_NOTHROW(lemma25_bound_check(2, 3, parse_polynomial("x2^3 + x3^3", 3), 13));

  CHECK_THROWS_AS(mixed_power_polynomial(1, 3, parse_polynomial("x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", 3)),
                  PreconditionError);
  CHECK_THROWS_AS(mixed_power_polynomial(0, 3, parse_polynomial("x2^3 + x3^3", 3)), PreconditionError);
  CHECK_THROWS_AS(mixed_power_polynomial(1, 5, parse_polynomial("x2^3 + x3^3", 3)), PreconditionError);
  CHECK_THROWS_AS(mixed_power_polynomial(1, 3, parse_polynomial("x1^3 + x3^3", 3)), PreconditionError);
}
