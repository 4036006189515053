#pragma once

#include <string>

#include "sqfree/int128.hpp"

namespace sqfree {

// Exact rational with a positive, reduced denominator. Arithmetic is checked.
class Rational {
 public:
  Rational() = default;
  Rational(i128 num) : num_(num) {}  // NOLINT(google-explicit-constructor)
  Rational(i128 num, i128 den);

  i128 num() const { return num_; }
  i128 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string str() const;

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

}  // namespace sqfree
