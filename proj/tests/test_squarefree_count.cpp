#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "sqfree/arith.hpp"
#include "sqfree/error.hpp"
#include "sqfree/squarefree_count.hpp"

using namespace sqfree;

TEST_CASE("is_squarefree") {
  CHECK_FALSE(is_squarefree(0));
  CHECK(is_squarefree(-10));
  CHECK_FALSE(is_squarefree(12));
  CHECK_FALSE(is_squarefree(4'000'000'004));
  CHECK(is_squarefree(1));
  CHECK(is_squarefree(-1));
  for (i128 n = -3000; n <= 3000; ++n) CHECK(is_squarefree(n) == oracle::squarefree(n));
  // Products of distinct large primes and a square of a large prime.
  const i128 p = 1'000'000'007, q = 998'244'353, r = 1'000'000'009;
  CHECK(is_squarefree(p * q * r));
  CHECK_FALSE(is_squarefree(p * p * 3));
  CHECK_FALSE(is_squarefree(q * r * r));
  CHECK(is_squarefree(-p * q));
}

TEST_CASE("moebius and factorization agree with trial division") {
  for (u128 n = 1; n <= 3000; ++n) CHECK(moebius(n) == oracle::moebius(static_cast<i128>(n)));
  const auto table = moebius_table(3000);
  for (std::size_t n = 1; n <= 3000; ++n) CHECK(table[n] == oracle::moebius(static_cast<i128>(n)));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const u128 n = (static_cast<u128>(rng() >> 2) * (rng() >> 40)) | 1;
    u128 product = 1;
    for (const auto& f : factorize(n)) {
      CHECK(is_prime(f.prime));
      for (unsigned k = 0; k < f.exponent; ++k) product *= f.prime;
    }
    CHECK(product == n);
  }
}

TEST_CASE("count_exact examples") {
  const auto x1 = parse_polynomial("x1");
  const auto r = count_exact(x1, Box::cube(1, 10));
  CHECK(r.exact_count == 14);
  CHECK(r.total_points == 21);
  CHECK(r.zero_value_points == 1);
  CHECK(r.method == CountMethod::Factorization);

  CHECK(count_exact(parse_polynomial("4*x1", 2), Box({7, 3})).exact_count == 0);

  const auto xy = parse_polynomial("x1*x2");
  const u128 expected = oracle::squarefree_count(xy, {2, 2});
  CHECK(count_exact(xy, Box({2, 2})).exact_count == expected);
  CHECK(count_exact(xy, Box({2, 2})).zero_value_points == 9);
}

TEST_CASE("count_sieve examples") {
  CHECK(count_sieve(parse_polynomial("x1"), Box::cube(1, 10)).exact_count == 14);
  CHECK(count_sieve(parse_polynomial("x1^2"), Box::cube(1, 10)).exact_count == 2);
  const auto xy = parse_polynomial("x1*x2");
  const auto sieve = count_sieve(xy, Box({2, 2}));
  CHECK(sieve.method == CountMethod::MoebiusSieve);
  CHECK(sieve.exact_count == count_exact(xy, Box({2, 2})).exact_count);
}

TEST_CASE("both counting methods agree with the naive count") {
  const char* corpus[] = {"x1^3 + 2*x2^3", "x1^2 + x2^2 + 1", "x1*x2 - x3^2", "2*x1^2 + 2*x1 + 2*x2^2 + 2*x2 + 4",
                          "x1^4 - x2^3 + 7", "9*x1 + 3", "x1^3 + x2^3 + x2*x3^2", "-x1^2*x2 + 5"};
  for (const char* text : corpus) {
    const auto p = parse_polynomial(text);
    CAPTURE(text);
    std::vector<i128> bounds(p.num_vars(), p.num_vars() == 3 ? 6 : 25);
    const Box box(bounds);
    const u128 expected = oracle::squarefree_count(p, bounds);
    CHECK(count_exact(p, box).exact_count == expected);
    CHECK(count_sieve(p, box).exact_count == expected);
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto p = parse_polynomial("x1^3 + 2*x2^3 - x1*x2");
  CountConfig one, many;
  many.threads = 6;
  for (const Box& box : {Box({40, 9}), Box({3, 50})}) {
    CHECK(to_json(count_exact(p, box, one)) == to_json(count_exact(p, box, many)));
    CHECK(to_json(count_sieve(p, box, one)) == to_json(count_sieve(p, box, many)));
    CHECK(build_value_table(p, box, one.enumeration()).entries == build_value_table(p, box, many.enumeration()).entries);
  }
}

TEST_CASE("counting properties") {
  // Monotone in the box.
  const auto p = parse_polynomial("x1^2 + x2^3 + 3");
  u128 previous = 0;
  for (i128 P = 1; P <= 12; ++P) {
    const u128 c = count_exact(p, Box({P, P + 1})).exact_count;
    CHECK(c >= previous);
    previous = c;
  }
  // Odd polynomials: the count over a symmetric box is invariant under x -> -x,
  // so it equals twice the count over the half box with x1 > 0 plus the x1 = 0 slice.
  for (const char* text : {"x1*x2", "x1^3 + x2^3"}) {
    const auto q = parse_polynomial(text);
    u128 positive = 0, zero_slice = 0;
    oracle::for_each_in_box({9, 9}, [&](const std::vector<i128>& x) {
      const bool sf = oracle::squarefree(oracle::evaluate(q, x));
      if (x[0] > 0) positive += sf;
      if (x[0] == 0) zero_slice += sf;
    });
    CHECK(count_exact(q, Box::cube(2, 9)).exact_count == 2 * positive + zero_slice);
  }
  // Zero values are never counted.
  const auto z = parse_polynomial("x1^2 - x2^2");
  const auto r = count_exact(z, Box::cube(2, 10));
  u128 zeros = 0;
  oracle::for_each_in_box({10, 10}, [&](const std::vector<i128>& x) { zeros += oracle::evaluate(z, x) == 0; });
  CHECK(r.zero_value_points == zeros);
  CHECK(r.exact_count + r.zero_value_points <= r.total_points);
  CHECK(r.exact_count == oracle::squarefree_count(z, {10, 10}));
}

TEST_CASE("guards") {
  CountConfig config;
  config.max_points = 1000;
  CHECK_THROWS_AS(count_exact(parse_polynomial("x1*x2"), Box::cube(2, 20), config), GuardError);
  config.max_points = 1'000'000;
  config.max_value = 1000;
  CHECK_THROWS_AS(count_sieve(parse_polynomial("x1^3"), Box::cube(1, 20), config), GuardError);
  CHECK_THROWS_AS(count_exact(parse_polynomial("x1*x2"), Box::cube(3, 2)), DimensionError);
}

TEST_CASE("asymptotic report") {
  const auto r = asymptotic_report(parse_polynomial("x1"), Box::cube(1, 2000), 10'000);
  CHECK(r.exact_count == oracle::squarefree_count(parse_polynomial("x1"), {2000}));
  CHECK(r.relative_error < 0.01);
  CHECK_FALSE(r.exact_match);

  const auto zero = asymptotic_report(parse_polynomial("4*x1", 2), Box({30, 30}), 100);
  CHECK(zero.exact_count == 0);
  CHECK(zero.predicted == 0);
  CHECK(zero.exact_match);

  const auto xy = asymptotic_report(parse_polynomial("x1*x2"), Box({300, 300}), 1000);
  CHECK(xy.relative_error < 0.05);

  const auto j = nlohmann::json::parse(to_json(xy));
  CHECK(j["method"] == "Factorization");
  CHECK(j["exact_count"] == to_string(xy.exact_count));
  CHECK(j["predicted_main_term"].is_string());
  CHECK(j["relative_error"].is_string());
}

TEST_CASE("histogram csv") {
  const auto table = build_value_table(parse_polynomial("x1^2", 1), Box::cube(1, 2), {});
  CHECK(histogram_csv(table) == "n,R\n0,1\n1,2\n4,2\n");
}

TEST_CASE("theorem13_experiment on polynomials with a fixed square divisor") {
  const auto t = theorem13_experiment(parse_polynomial("4*x1", 2), {Box({10, 10}), Box({50, 50})}, 50);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.zero_factor_primes == std::vector<std::uint64_t>{2});
  for (const auto& row : t.rows) {
    CHECK(row.count == 0);
    CHECK(row.density == 0);
    CHECK(row.upper_bound == 0);
    CHECK(row.within_bound);
  }

  const auto p = parse_polynomial("2*x1^2 + 2*x1 + 2*x2^2 + 2*x2 + 4");
  CHECK(rho_bruteforce(p, 4).count == 16);
  const auto u = theorem13_experiment(p, {Box({10, 10}), Box({40, 40})}, 50);
  for (const auto& row : u.rows) CHECK(row.count == 0);

  CHECK_THROWS_AS(theorem13_experiment(parse_polynomial("x1"), {Box({10})}, 50), PreconditionError);
  CHECK_THROWS_AS(theorem13_experiment(parse_polynomial("4*x1", 2), {Box({10, 10}), Box({5, 50})}, 50),
                  PreconditionError);
}

TEST_CASE("theorem13_experiment density stays under its upper bound") {
  const auto p = parse_polynomial("210*x1^2*x2^2 + 210");
  const auto t = theorem13_experiment(p, {Box({6, 6}), Box({20, 20})}, 30, 1.0);
  for (const auto& row : t.rows) {
    CHECK(row.upper_bound > 0);
    CHECK(row.density <= row.upper_bound);
    CHECK(row.within_bound);
  }
}

TEST_CASE("mixed box height") {
  CHECK(mixed_box_height(16, 4) == 8);
  CHECK(mixed_box_height(16, 3) == 16);
  for (i128 P = 1; P <= 2000; ++P) {
    const i128 Q = mixed_box_height(P, 4);
    const long double exact = std::pow(static_cast<long double>(P), 0.75L);
    CHECK(std::fabs(static_cast<long double>(Q) - exact) <= 0.5L);
  }
}

TEST_CASE("theorem14_experiment counts match the oracle") {
  const auto cstar = parse_polynomial("x2^3 + x2*x3^2", 3);
  const auto t = theorem14_experiment(1, 3, cstar, {4, 6}, 50);
  REQUIRE(t.rows.size() == 2);
  const auto p = parse_polynomial("x1^3 + x2^3 + x2*x3^2");
  for (const auto& row : t.rows) {
    CHECK(row.Q == row.P);
    CHECK(row.count == oracle::squarefree_count(p, {row.Q, row.P, row.P}));
    CHECK(row.predicted > 0);
  }
  const auto csv = theorem14_csv(t);
  CHECK(csv.rfind("P,Q,N_exact,predicted,rel_error\n4,4,", 0) == 0);

  const auto t4 = theorem14_experiment(1, 4, parse_polynomial("x2^3 + x2^2*x3 + x3^3", 3), {16}, 20);
  CHECK(t4.rows[0].Q == 8);
  CHECK(t4.rows[0].count ==
        oracle::squarefree_count(parse_polynomial("x1^4 + x2^3 + x2^2*x3 + x3^3"), {8, 16, 16}));

  CHECK_THROWS_AS(theorem14_experiment(1, 3, parse_polynomial("x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", 3), {4}, 20),
                  PreconditionError);
}

TEST_CASE("theorem14_experiment prime band diagnostic") {
  const auto t = theorem14_experiment(1, 3, parse_polynomial("x2^3 + x2*x3^2", 3), {12}, 30, true);
  REQUIRE(t.rows[0].diagnostic);
  const auto& d = *t.rows[0].diagnostic;
  CHECK(d.X == 2);
  REQUIRE(d.bands.size() == 4);
  // Independent recount: N0 = nonzero values free of 4 | P(x).
  const auto p = parse_polynomial("x1^3 + x2^3 + x2*x3^2");
  u128 n0 = 0;
  oracle::for_each_in_box({12, 12, 12}, [&](const std::vector<i128>& x) {
    const i128 v = oracle::evaluate(p, x);
    n0 += v != 0 && v % 4 != 0;
  });
  CHECK(d.N0 == n0);
  CHECK(t.rows[0].count <= d.N0);
  u128 bands = 0;
  for (const auto& b : d.bands) bands += b.count;
  CHECK(t.rows[0].count + bands >= d.N0);
}
