#include "sqfree/rational.hpp"

namespace sqfree {

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  if (den < 0) {
    num = checked_sub(0, num);
    den = checked_sub(0, den);
  }
  const auto g = static_cast<i128>(gcd(uabs(num), uabs(den)));
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational operator+(const Rational& a, const Rational& b) {
  return {checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) {
  return {checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator*(const Rational& a, const Rational& b) {
  // Cross-reduce first to keep intermediates small.
  const auto g1 = static_cast<i128>(gcd(uabs(a.num_), uabs(b.den_)));
  const auto g2 = static_cast<i128>(gcd(uabs(b.num_), uabs(a.den_)));
  const i128 n1 = g1 > 1 ? a.num_ / g1 : a.num_;
  const i128 d2 = g1 > 1 ? b.den_ / g1 : b.den_;
  const i128 n2 = g2 > 1 ? b.num_ / g2 : b.num_;
  const i128 d1 = g2 > 1 ? a.den_ / g2 : a.den_;
  return {checked_mul(n1, n2), checked_mul(d1, d2)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw PreconditionError("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::string Rational::str() const {
  if (den_ == 1) return to_string(num_);
  return to_string(num_) + "/" + to_string(den_);
}

}  // namespace sqfree
