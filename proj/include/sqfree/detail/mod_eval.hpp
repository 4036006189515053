#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sqfree/int128.hpp"
#include "sqfree/polynomial.hpp"

namespace sqfree::detail {

// A polynomial flattened for repeated evaluation modulo a fixed modulus.
// Only the listed variables are read from the point.
class ModEvaluator {
 public:
  ModEvaluator(const Polynomial& p, std::uint64_t modulus) : modulus_(modulus) {
    const auto m = static_cast<i128>(modulus);
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.coeff = static_cast<std::uint64_t>(mod_floor(c, m));
      if (t.coeff == 0) continue;
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] != 0) t.factors.emplace_back(static_cast<unsigned>(j), e[j]);
      }
      terms_.push_back(std::move(t));
    }
  }

  std::uint64_t modulus() const { return modulus_; }
  bool identically_zero() const { return terms_.empty(); }

  // Point coordinates must already be reduced below the modulus.
  std::uint64_t operator()(const std::uint64_t* x) const {
    const u128 m = modulus_;
    u128 total = 0;
    for (const auto& t : terms_) {
      u128 v = t.coeff;
      for (const auto& [var, exp] : t.factors) {
        for (unsigned k = 0; k < exp; ++k) v = v * x[var] % m;
      }
      total += v;
      if (total >= m) total -= m;
    }
    return static_cast<std::uint64_t>(total);
  }

 private:
  struct Term {
    std::uint64_t coeff;
    std::vector<std::pair<unsigned, unsigned>> factors;
  };
  std::uint64_t modulus_;
  std::vector<Term> terms_;
};

}  // namespace sqfree::detail
