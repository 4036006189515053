#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "sqfree/error.hpp"
#include "sqfree/polynomial.hpp"

using namespace sqfree;

namespace {

Exponents ex(std::initializer_list<unsigned> e) { return Exponents(e); }

Polynomial random_poly(std::mt19937_64& rng, std::size_t s, int terms, unsigned max_deg) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  Polynomial::TermMap m;
  for (int t = 0; t < terms; ++t) {
    Exponents e(s);
    for (auto& v : e) v = deg(rng);
    const int c = coeff(rng);
    if (c != 0) m[e] += c;
  }
  std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
  return Polynomial(s, m);
}

UnimodularMap random_unimodular(std::mt19937_64& rng, std::size_t s) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(s) - 1), factor(-2, 2);
  UnimodularMap u = UnimodularMap::identity(s);
  for (int step = 0; step < 4; ++step) {
    const auto i = static_cast<std::size_t>(pick(rng));
    const auto j = static_cast<std::size_t>(pick(rng));
    if (i == j) continue;
    u = u * (step % 3 == 2 ? UnimodularMap::swap(s, i, j) : UnimodularMap::shear(s, i, j, factor(rng)));
  }
  return u;
}

}  // namespace

TEST_CASE("parse builds the expected term maps") {
  const auto p = parse_polynomial("x1^2 + 2");
  CHECK(p.num_vars() == 1);
  CHECK(p.terms() == Polynomial::TermMap{{ex({2}), 1}, {ex({0}), 2}});

  const auto q = parse_polynomial("x1^3 + 2*x2^3");
  CHECK(q.num_vars() == 2);
  CHECK(q.terms() == Polynomial::TermMap{{ex({3, 0}), 1}, {ex({0, 3}), 2}});

  const auto z = parse_polynomial("x1*x2 - x1*x2");
  CHECK(z.is_zero());
  CHECK(z.num_vars() == 2);
}

TEST_CASE("parse accepts signs, spacing, repeated factors and arity") {
  CHECK(parse_polynomial("-x1") == Polynomial(1, {{ex({1}), -1}}));
  CHECK(parse_polynomial("  3 * x1 * x1 * x2^2 - 4") == Polynomial(2, {{ex({2, 2}), 3}, {ex({0, 0}), -4}}));
  CHECK(parse_polynomial("x1", 3).num_vars() == 3);
  CHECK(parse_polynomial("7").num_vars() == 1);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_polynomial("x0 + 1"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1 +"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x1 ^"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);
  CHECK_THROWS_AS(parse_polynomial("2 x1"), ParseError);
  try {
    parse_polynomial("x1 + y2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("evaluate") {
  const i128 three[] = {3};
  CHECK(parse_polynomial("x1^2 + 2").evaluate(three) == 11);
  const i128 pt[] = {-1, 2};
  CHECK(parse_polynomial("x1^3 + 2*x2^3").evaluate(pt) == 15);
  const i128 zero[] = {0, 0, 0};
  CHECK(parse_polynomial("x1*x2 + 5*x3^2 - 17").evaluate(zero) == -17);

  const i128 wrong[] = {1};
  CHECK_THROWS_AS(parse_polynomial("x1 + x2").evaluate(wrong), DimensionError);
  const i128 huge[] = {i128{1} << 60};
  CHECK_THROWS_AS(parse_polynomial("x1^3").evaluate(huge), OverflowError);
}

TEST_CASE("evaluate agrees with monomial expansion on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_poly(rng, 3, 6, 4);
    std::vector<i128> x(3);
    for (auto& v : x) v = coord(rng);
    CHECK(p.evaluate(x) == oracle::evaluate(p, x));
    std::vector<std::uint64_t> xm(3);
    const std::uint64_t m = 97;
    for (std::size_t j = 0; j < 3; ++j) xm[j] = static_cast<std::uint64_t>(mod_floor(x[j], m));
    CHECK(p.evaluate_mod(xm, m) == static_cast<std::uint64_t>(mod_floor(oracle::evaluate(p, x), m)));
  }
}

TEST_CASE("render round-trips and orders terms by graded lex") {
  CHECK(render(parse_polynomial("2 + x1^2")) == "x1^2 + 2");
  CHECK(render(parse_polynomial("x2^3 - x1^3 + x1")) == "-x1^3 + x2^3 + x1");
  CHECK(render(Polynomial(2)) == "0");
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_poly(rng, 1 + trial % 4, 5, 3);
    CHECK(parse_polynomial(render(p), p.num_vars()) == p);
  }
}

TEST_CASE("substitute_unimodular examples") {
  const auto x1 = parse_polynomial("x1", 2);
  CHECK(substitute_unimodular(x1, UnimodularMap::identity(2)) == x1);

  // x2 := x2 + x1
  const auto shear = UnimodularMap::shear(2, 1, 0, 1);
  CHECK(substitute_unimodular(parse_polynomial("x2"), shear) == parse_polynomial("x1 + x2"));
  CHECK(substitute_unimodular(parse_polynomial("x1^2*x2"), shear) == parse_polynomial("x1^3 + x1^2*x2"));

  CHECK_THROWS_AS(UnimodularMap({{2, 0}, {0, 1}}), PreconditionError);
  CHECK_THROWS_AS(substitute_unimodular(parse_polynomial("x1", 3), shear), DimensionError);
}

TEST_CASE("substitution matches composition by explicit expansion and is functorial") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t s = 2 + trial % 2;
    const auto p = random_poly(rng, s, 4, 3);
    const auto u = random_unimodular(rng, s);
    const auto v = random_unimodular(rng, s);
    CHECK(substitute_unimodular(p, u).terms() == oracle::compose(p, u.matrix()));
    CHECK(substitute_unimodular(substitute_unimodular(p, u), v) == substitute_unimodular(p, u * v));
    const i128 det = oracle::determinant(u.matrix());
    CHECK((det == 1 || det == -1));
    CHECK(u.determinant() == det);
  }
}

TEST_CASE("make_cubes_explicit") {
  const auto diag = parse_polynomial("x1^3 + x2^3");
  const auto r = make_cubes_explicit(diag);
  CHECK(r.form == diag);
  CHECK(r.map == UnimodularMap::identity(2));

  for (const char* text : {"x1^2*x2", "x1*x2*x3", "x1*x2^2 + x2*x3^2", "x3^3 + x2*x3^2", "x2^2*x3"}) {
    CAPTURE(text);
    const auto p = parse_polynomial(text, 3);
    const auto out = make_cubes_explicit(p);
    CHECK(out.form.terms() == oracle::compose(p, out.map.matrix()));
    const i128 det = oracle::determinant(out.map.matrix());
    CHECK((det == 1 || det == -1));
    CHECK(out.form.coefficient(ex({3, 0, 0})) != 0);
    CHECK(out.form.coefficient(ex({0, 3, 0})) != 0);
  }

  CHECK_THROWS_AS(make_cubes_explicit(parse_polynomial("x1^3", 2)), PreconditionError);
  CHECK_THROWS_AS(make_cubes_explicit(parse_polynomial("x1^2 + x2^3")), PreconditionError);
  CHECK_THROWS_AS(make_cubes_explicit(Polynomial(2)), PreconditionError);
}

TEST_CASE("is_scaled_linear_cube examples") {
  const auto a = is_scaled_linear_cube(parse_polynomial("8*x1^3 + 36*x1^2*x2 + 54*x1*x2^2 + 27*x2^3"));
  REQUIRE(a);
  CHECK(a->scale == Rational(1));
  CHECK(a->linear == std::vector<Rational>{2, 3});

  const auto b = is_scaled_linear_cube(parse_polynomial("2*x1^3 + 6*x1^2*x2 + 6*x1*x2^2 + 2*x2^3"));
  REQUIRE(b);
  CHECK(b->scale == Rational(2));
  CHECK(b->linear == std::vector<Rational>{1, 1});

  CHECK_FALSE(is_scaled_linear_cube(parse_polynomial("x1^3 + x2^3")));
  CHECK_THROWS_AS(is_scaled_linear_cube(parse_polynomial("x1^2")), PreconditionError);
}

TEST_CASE("is_scaled_linear_cube recognises constructed cubes and rejects perturbations") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> entry(-4, 4), numerator(1, 5);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t s = 2 + trial % 2;
    Polynomial linear(s);
    for (std::size_t j = 0; j < s; ++j) linear += entry(rng) * Polynomial::variable(s, j);
    if (linear.is_zero()) continue;
    const Polynomial cube = linear.pow(3);
    // a = num/2 when every coefficient of the cube is even, else a = num.
    bool all_even = true;
    for (const auto& [e, c] : cube.terms()) all_even = all_even && c % 2 == 0;
    const i128 num = (trial % 3 == 0 ? -1 : 1) * numerator(rng);
    const i128 den = all_even ? 2 : 1;
    Polynomial::TermMap scaled;
    for (const auto& [e, c] : cube.terms()) scaled[e] = c / den * num;
    const Polynomial p(s, scaled);
    CAPTURE(render(p));
    const auto found = is_scaled_linear_cube(p);
    REQUIRE(found);
    ++checked;
    // a * (b.x)^3 has coefficient a * 3!/(e!) * prod b_j^e_j at x^e.
    std::size_t monomials = 0;
    std::function<void(std::size_t, unsigned, Exponents&)> visit = [&](std::size_t j, unsigned left, Exponents& e) {
      if (j + 1 == s) {
        e[j] = left;
        Rational mult = 1;
        i128 fact = 1;
        for (std::size_t t = 0; t < s; ++t) {
          for (unsigned k = 0; k < e[t]; ++k) mult = mult * found->linear[t];
          for (unsigned k = 2; k <= e[t]; ++k) fact *= k;
        }
        CHECK(found->scale * mult * Rational(6 / fact) == Rational(p.coefficient(e)));
        ++monomials;
        return;
      }
      for (unsigned k = 0; k <= left; ++k) {
        e[j] = k;
        visit(j + 1, left - k, e);
      }
    };
    Exponents e(s, 0);
    visit(0, 3, e);
    CHECK(monomials == (s == 2 ? 4u : 10u));

    Exponents bump(s, 0);
    bump[0] = 1;
    bump[1] = 2;
    CHECK_FALSE(is_scaled_linear_cube(p + Polynomial(s, {{bump, 1}})));
  }
  CHECK(checked > 900);
}

TEST_CASE("Box") {
  const Box b({2, 3});
  CHECK(b.cardinality() == 35);
  CHECK(Box::cube(3, 1).cardinality() == 27);
  CHECK_THROWS_AS(Box({0, 1}), PreconditionError);
}
