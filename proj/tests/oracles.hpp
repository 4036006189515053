#pragma once

// Slow, obviously-correct reference implementations used only by tests.
// None of these call into the library's counting code.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "sqfree/int128.hpp"
#include "sqfree/polynomial.hpp"

namespace oracle {

using sqfree::i128;
using sqfree::u128;

inline bool squarefree(i128 n) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (i128 k = 2; k * k <= n; ++k) {
    if (n % (k * k) == 0) return false;
  }
  return true;
}

inline int moebius(i128 n) {
  if (!squarefree(n)) return 0;
  int sign = 1;
  for (i128 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      sign = -sign;
    }
  }
  return n > 1 ? -sign : sign;
}

inline u128 divisor_count(u128 n) {
  u128 c = 0;
  for (u128 d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

// Calls fn(x) for every x in prod [lo_j, hi_j].
inline void for_each_point(const std::vector<i128>& lo, const std::vector<i128>& hi,
                           const std::function<void(const std::vector<i128>&)>& fn) {
  std::vector<i128> x = lo;
  for (;;) {
    fn(x);
    std::size_t j = x.size();
    for (;;) {
      if (j == 0) return;
      --j;
      if (x[j] < hi[j]) {
        ++x[j];
        break;
      }
      x[j] = lo[j];
    }
  }
}

inline void for_each_in_box(const std::vector<i128>& bounds, const std::function<void(const std::vector<i128>&)>& fn) {
  std::vector<i128> lo(bounds.size());
  for (std::size_t j = 0; j < bounds.size(); ++j) lo[j] = -bounds[j];
  for_each_point(lo, bounds, fn);
}

// Evaluates by expanding every monomial with repeated multiplication.
inline i128 evaluate(const sqfree::Polynomial& p, const std::vector<i128>& x) {
  i128 total = 0;
  for (const auto& [e, c] : p.terms()) {
    i128 v = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (unsigned k = 0; k < e[j]; ++k) v *= x[j];
    total += v;
  }
  return total;
}

inline u128 rho(const sqfree::Polynomial& p, i128 d) {
  u128 count = 0;
  std::vector<i128> lo(p.num_vars(), 0), hi(p.num_vars(), d - 1);
  for_each_point(lo, hi, [&](const std::vector<i128>& x) {
    i128 v = evaluate(p, x) % d;
    count += v == 0;
  });
  return count;
}

inline u128 squarefree_count(const sqfree::Polynomial& p, const std::vector<i128>& bounds) {
  u128 count = 0;
  for_each_in_box(bounds, [&](const std::vector<i128>& x) { count += squarefree(evaluate(p, x)); });
  return count;
}

inline std::map<i128, u128> histogram(const sqfree::Polynomial& p, const std::vector<i128>& bounds) {
  std::map<i128, u128> h;
  for_each_in_box(bounds, [&](const std::vector<i128>& x) { ++h[evaluate(p, x)]; });
  return h;
}

// Pairs (x, X) with p(x) = p(X), by a double loop.
inline u128 collisions(const sqfree::Polynomial& p, const std::vector<i128>& bounds) {
  std::vector<i128> values;
  for_each_in_box(bounds, [&](const std::vector<i128>& x) { values.push_back(evaluate(p, x)); });
  u128 count = 0;
  for (i128 a : values)
    for (i128 b : values) count += a == b;
  return count;
}

inline u128 quad_count(i128 a, i128 b, i128 c, i128 d, i128 e, i128 f, i128 P) {
  u128 count = 0;
  for (i128 x = -P; x <= P; ++x)
    for (i128 y = -P; y <= P; ++y) count += a * x * x + b * x * y + c * y * y + d * x + e * y + f == 0;
  return count;
}

inline bool is_square(i128 n) {
  if (n < 0) return false;
  for (i128 z = 0; z * z <= n; ++z) {
    if (z * z == n) return true;
  }
  return false;
}

// Coefficient-wise composition q(x) = p(M x) by multiplying out linear forms.
inline std::map<std::vector<unsigned>, i128> compose(const sqfree::Polynomial& p,
                                                      const std::vector<std::vector<i128>>& M) {
  using Terms = std::map<std::vector<unsigned>, i128>;
  const std::size_t n = p.num_vars();
  auto multiply = [&](const Terms& a, const Terms& b) {
    Terms r;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        std::vector<unsigned> e(n);
        for (std::size_t j = 0; j < n; ++j) e[j] = ea[j] + eb[j];
        r[e] += ca * cb;
      }
    return r;
  };
  Terms out;
  for (const auto& [e, c] : p.terms()) {
    Terms term{{std::vector<unsigned>(n, 0), c}};
    for (std::size_t i = 0; i < n; ++i) {
      Terms linear;
      for (std::size_t j = 0; j < n; ++j) {
        if (M[i][j] == 0) continue;
        std::vector<unsigned> ej(n, 0);
        ej[j] = 1;
        linear[ej] = M[i][j];
      }
      for (unsigned k = 0; k < e[i]; ++k) term = multiply(term, linear);
    }
    for (const auto& [et, ct] : term) out[et] += ct;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline i128 determinant(std::vector<std::vector<i128>> m) {
  // Laplace expansion; fine for the 2x2 and 3x3 matrices in tests.
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  i128 det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<i128>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<i128> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(row);
    }
    det += (col % 2 ? -1 : 1) * m[0][col] * determinant(minor);
  }
  return det;
}

}  // namespace oracle
