#pragma once

// Sparse multivariate integer polynomials in x1..xs.
//
// Terms are kept in a map from exponent vector to nonzero coefficient, so two
// polynomials compare equal exactly when they are the same polynomial.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqfree/int128.hpp"
#include "sqfree/rational.hpp"

namespace sqfree {

using Exponents = std::vector<unsigned>;

class Polynomial {
 public:
  using TermMap = std::map<Exponents, i128>;

  explicit Polynomial(std::size_t num_vars);
  Polynomial(std::size_t num_vars, TermMap terms);

  static Polynomial constant(std::size_t num_vars, i128 value);
  // The variable x_{index+1}; index is zero-based.
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  i128 coefficient(const Exponents& e) const;
  i128 constant_term() const;
  // Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(unsigned degree) const;
  bool is_cubic_form() const { return !is_zero() && is_homogeneous(3); }
  unsigned max_exponent(std::size_t var) const;
  // Zero-based indices of variables that occur with positive exponent.
  std::vector<std::size_t> involved_variables() const;

  i128 evaluate(std::span<const i128> point) const;
  // Value reduced into [0, modulus).
  std::uint64_t evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t modulus) const;

  Polynomial partial_derivative(std::size_t var) const;

  // Same polynomial viewed in more variables (new variables do not occur).
  Polynomial with_num_vars(std::size_t num_vars) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(i128 scalar, const Polynomial& p);
  Polynomial pow(unsigned exponent) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void add_term(const Exponents& e, i128 c);

  std::size_t num_vars_;
  TermMap terms_;
};

// Grammar: poly := term (('+'|'-') term)*, term := integer | [integer '*'] factor ('*' factor)*,
// factor := 'x' index ['^' exponent]. A leading sign is accepted; whitespace is ignored.
// num_vars defaults to the largest index mentioned (at least 1).
Polynomial parse_polynomial(std::string_view text, std::optional<std::size_t> arity = std::nullopt);

// Canonical text in graded-lexicographic order; parse_polynomial(render(p)) == p.
std::string render(const Polynomial& p);

// The region {x : |x_j| <= P_j for every j}.
class Box {
 public:
  explicit Box(std::vector<i128> bounds);
  // The cube [-P, P]^s.
  static Box cube(std::size_t num_vars, i128 P);

  std::size_t size() const { return bounds_.size(); }
  const std::vector<i128>& bounds() const { return bounds_; }
  i128 bound(std::size_t j) const { return bounds_[j]; }
  // prod (2 P_j + 1), checked.
  u128 cardinality() const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<i128> bounds_;
};

// Integer s x s matrix with determinant +-1, acting on column vectors.
class UnimodularMap {
 public:
  using Matrix = std::vector<std::vector<i128>>;

  explicit UnimodularMap(Matrix matrix);

  static UnimodularMap identity(std::size_t n);
  // x_target := x_target + factor * x_source
  static UnimodularMap shear(std::size_t n, std::size_t target, std::size_t source, i128 factor);
  static UnimodularMap swap(std::size_t n, std::size_t i, std::size_t j);

  std::size_t dimension() const { return matrix_.size(); }
  const Matrix& matrix() const { return matrix_; }
  i128 determinant() const { return determinant_; }

  std::vector<i128> apply(std::span<const i128> x) const;

  friend UnimodularMap operator*(const UnimodularMap& a, const UnimodularMap& b);
  friend bool operator==(const UnimodularMap& a, const UnimodularMap& b) { return a.matrix_ == b.matrix_; }

 private:
  Matrix matrix_;
  i128 determinant_;
};

// Exact determinant by fraction-free elimination.
i128 determinant(const UnimodularMap::Matrix& m);

// q with q(x) = p(u x).
Polynomial substitute_unimodular(const Polynomial& p, const UnimodularMap& u);

struct CubeExposure {
  Polynomial form;
  UnimodularMap map;
};

// Finds a unimodular u such that p o u has nonzero x1^3 and x2^3 coefficients.
CubeExposure make_cubes_explicit(const Polynomial& p);

struct ScaledLinearCube {
  Rational scale;
  std::vector<Rational> linear;  // primitive integer vector, first nonzero entry positive
};

// Returns (a, b) with p = a (b . x)^3, or nothing if p has no such shape.
std::optional<ScaledLinearCube> is_scaled_linear_cube(const Polynomial& p);

}  // namespace sqfree
