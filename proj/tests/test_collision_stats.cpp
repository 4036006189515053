#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "oracles.hpp"
#include "sqfree/collision_stats.hpp"
#include "sqfree/error.hpp"

using namespace sqfree;

TEST_CASE("value_histogram examples") {
  const auto h = value_histogram(parse_polynomial("x1^3", 2), Box({1, 1}));
  CHECK(h.table.entries == std::vector<std::pair<i128, u128>>{{-1, 3}, {0, 3}, {1, 3}});

  const auto line = value_histogram(parse_polynomial("x1"), Box::cube(1, 5));
  CHECK(line.table.entries.size() == 11);
  for (const auto& [v, r] : line.table.entries) CHECK(r == 1);

  const auto p = parse_polynomial("x1^3 + 2*x2^3");
  const auto g = value_histogram(p, Box({2, 2}));
  CHECK(g.total_points() == 25);
  u128 mass = 0;
  for (const auto& [v, r] : g.table.entries) mass += r;
  CHECK(mass == 25);
  for (const auto& [v, r] : oracle::histogram(p, {2, 2})) CHECK(g.R(v) == r);
  CHECK(g.is_symmetric());
}

TEST_CASE("collision_count_M") {
  CHECK(collision_count_M(parse_polynomial("x1^3", 2), 1, true).count == 27);
  CHECK_THROWS_AS(collision_count_M(parse_polynomial("x1^3", 2), 1), PreconditionError);
  CHECK_THROWS_AS(collision_count_M(parse_polynomial("x1^2 + x2^3"), 1), PreconditionError);

  const auto p = parse_polynomial("x1^3 + 2*x2^3");
  for (i128 P = 1; P <= 4; ++P) {
    const auto m = collision_count_M(p, P);
    CHECK(m.count == oracle::collisions(p, {P, P}));
    CHECK(m.count >= (2 * P + 1) * (2 * P + 1));
  }
  const auto q = parse_polynomial("x1^2*x2 - x2^3 + 3*x1*x2^2");
  for (i128 P = 1; P <= 4; ++P) CHECK(collision_count_M(q, P).count == oracle::collisions(q, {P, P}));
}

TEST_CASE("collision_count_L") {
  const auto cstar = parse_polynomial("x2^3 + x2*x3^2", 3);
  const auto l = collision_count_L(1, 3, cstar, 4);
  CHECK(l.box.bounds() == std::vector<i128>{4, 4, 4});
  CHECK(l.count == oracle::collisions(parse_polynomial("x1^3 + x2^3 + x2*x3^2"), {4, 4, 4}));

  const auto l4 = collision_count_L(1, 4, parse_polynomial("x2^3 + x2^2*x3 + x3^3", 3), 16);
  CHECK(l4.box.bounds() == std::vector<i128>{8, 16, 16});

  CHECK_THROWS_AS(collision_count_L(2, 3, parse_polynomial("x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", 3), 4),
                  PreconditionError);
}

TEST_CASE("exponent_fit") {
  const auto exact = exponent_fit({{10, 100}, {20, 400}, {40, 1600}}, 2.0);
  CHECK(exact.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.excess() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exponent_fit({{10, 100}, {20, 400}, {40, 1599}}, 2.0).slope < 2.0);

  CHECK_THROWS_AS(exponent_fit({{10, 100}, {20, 400}}, 2.0), PreconditionError);
  CHECK_THROWS_AS(exponent_fit({{10, 100}, {20, 0}, {40, 3}}, 2.0), PreconditionError);
  CHECK_THROWS_AS(exponent_fit({{10, 100}, {10, 400}, {40, 3}}, 2.0), PreconditionError);

  const auto j = nlohmann::json::parse(to_json(exact));
  CHECK(j["samples"].size() == 3);
  CHECK(j["slope"].is_string());

  const auto csv = exponent_csv({{10, 100}, {20, 400}, {40, 1600}});
  CHECK(csv == "P,count,log_slope_so_far\n10,100,\n20,400,2\n40,1600,2\n");
}

TEST_CASE("M(P) growth for x1^3 + 2 x2^3 and the degenerate control") {
  std::vector<std::pair<i128, u128>> samples, control;
  for (i128 P : {8, 16, 32}) {
    samples.emplace_back(P, collision_count_M(parse_polynomial("x1^3 + 2*x2^3"), P).count);
    control.emplace_back(P, collision_count_M(parse_polynomial("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3"), P, true).count);
  }
  const double slope = exponent_fit(samples, 2.0).slope;
  CHECK(slope > 1.7);
  CHECK(slope < 2.5);
  CHECK(exponent_fit(control, 2.0).slope > 2.5);
}
