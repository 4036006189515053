#include "sqfree/quad_diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqfree/arith.hpp"
#include "sqfree/error.hpp"

namespace sqfree {

i128 QuadInstance::delta() const { return checked_sub(checked_mul(4, checked_mul(a, c)), checked_mul(b, b)); }

i128 QuadInstance::theta() const {
  i128 t = checked_mul(checked_mul(4, checked_mul(a, c)), f);
  t = checked_add(t, checked_mul(checked_mul(e, b), d));
  t = checked_sub(t, checked_mul(a, checked_mul(e, e)));
  t = checked_sub(t, checked_mul(c, checked_mul(d, d)));
  t = checked_sub(t, checked_mul(f, checked_mul(b, b)));
  return t;
}

i128 QuadInstance::evaluate(i128 x, i128 y) const {
  return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
}

const char* to_string(QuadTag tag) {
  static constexpr const char* names[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"};
  return names[static_cast<int>(tag)];
}

namespace {

// Delta = 0 subcases V, VI, VII for whichever of a, c fired.
QuadCase classify_degenerate(i128 l, i128 disc, QuadBranch branch) {
  QuadCase out;
  out.branch = branch;
  if (l != 0) {
    out.tag = QuadTag::VI;
    out.l = l;
    out.k = largest_square_divisor(uabs(l));
  } else {
    out.tag = is_perfect_square(disc) ? QuadTag::VII : QuadTag::V;
  }
  return out;
}

}  // namespace

QuadCase classify(const QuadInstance& q) {
  const i128 delta = q.delta();
  const i128 theta = q.theta();
  QuadCase out;
  if (q.a != 0 || q.c != 0) {
    if (delta != 0) {
      if (theta != 0) {
        out.tag = QuadTag::I;
      } else if (is_perfect_square(-delta)) {
        out.tag = QuadTag::IV;
        out.m = isqrt(static_cast<u128>(-delta));
      } else {
        out.tag = QuadTag::II;
      }
      return out;
    }
    if (q.a != 0) {
      return classify_degenerate(2 * q.a * q.e - q.b * q.d, q.d * q.d - 4 * q.a * q.f, QuadBranch::A);
    }
    return classify_degenerate(2 * q.c * q.d - q.b * q.e, q.e * q.e - 4 * q.c * q.f, QuadBranch::C);
  }
  if (delta != 0) {
    out.tag = theta != 0 ? QuadTag::III : QuadTag::VIII;
  } else {
    out.tag = QuadTag::IX;
  }
  return out;
}

namespace {

constexpr i128 kMaxCoefficient = i128{1} << 20;
constexpr i128 kMaxBox = i128{1} << 24;

void check_ranges(const QuadInstance& q, i128 P) {
  if (P < 1) throw PreconditionError("box half-width P must be >= 1");
  if (P > kMaxBox) throw OverflowError("box half-width exceeds 2^24; completed-square values may overflow");
  for (const i128 v : {q.a, q.b, q.c, q.d, q.e, q.f}) {
    if (v > kMaxCoefficient || v < -kMaxCoefficient) {
      throw OverflowError("coefficient exceeds 2^20; completed-square values may overflow");
    }
  }
}

// Exact quotient if divisible, else nothing.
std::optional<i128> exact_div(i128 num, i128 den) {
  if (num % den != 0) return std::nullopt;
  return num / den;
}

inline bool in_box(i128 v, i128 P) { return v >= -P && v <= P; }

template <typename Emit>
class Solver {
 public:
  Solver(const QuadInstance& q, i128 P, Emit& emit, bool swapped) : q_(q), P_(P), emit_(emit), swapped_(swapped) {}

  void run() {
    if (q_.a != 0) {
      leading_a();
    } else if (q_.b != 0) {
      hyperbolic();
    } else {
      linear();
    }
  }

 private:
  void out(i128 x, i128 y) {
    if (swapped_) {
      emit_(y, x);
    } else {
      emit_(x, y);
    }
  }

  // x = (X - b y - d) / (2a) for the completed square X = 2ax + by + d.
  void emit_from_X(i128 X, i128 y) {
    if (!in_box(y, P_)) return;
    if (auto x = exact_div(X - q_.b * y - q_.d, 2 * q_.a); x && in_box(*x, P_)) out(*x, y);
  }

  void leading_a() {
    const i128 delta = q_.delta();
    const i128 l = 2 * q_.a * q_.e - q_.b * q_.d;
    const i128 disc0 = q_.d * q_.d - 4 * q_.a * q_.f;
    if (delta == 0) {
      // X^2 = -2 l y + d^2 - 4af.
      if (l == 0) {
        if (!is_perfect_square(disc0)) return;  // no solutions at all
        const auto r = static_cast<i128>(isqrt(static_cast<u128>(disc0)));
        for (i128 y = -P_; y <= P_; ++y) {
          emit_from_X(r, y);
          if (r != 0) emit_from_X(-r, y);
        }
        return;
      }
      const i128 n = -2 * l;
      // Reflect y when the progression has negative step; the box is symmetric.
      const i128 sign = n > 0 ? 1 : -1;
      for (const auto& [t, z] : squares_in_progression(P_, n * sign, disc0)) {
        const i128 y = t * sign;
        emit_from_X(z, y);
        if (z != 0) emit_from_X(-z, y);
      }
      return;
    }
    if (delta > 0) {
      // Delta X^2 + Y^2 = -4 a Theta with Y = Delta y + l.
      const i128 rhs = -4 * q_.a * q_.theta();
      if (rhs < 0) return;
      const i128 box_X = 2 * (q_.a < 0 ? -q_.a : q_.a) * P_ + (q_.b < 0 ? -q_.b : q_.b) * P_ + (q_.d < 0 ? -q_.d : q_.d);
      const i128 lim = std::min(static_cast<i128>(isqrt(static_cast<u128>(rhs / delta))), box_X);
      for (i128 X = -lim; X <= lim; ++X) {
        const i128 y2 = rhs - delta * X * X;
        if (!is_perfect_square(y2)) continue;
        const auto r = static_cast<i128>(isqrt(static_cast<u128>(y2)));
        if (auto y = exact_div(r - l, delta)) emit_from_X(X, *y);
        if (r == 0) continue;
        if (auto y = exact_div(-r - l, delta)) emit_from_X(X, *y);
      }
      return;
    }
    // Delta < 0: sweep y and solve the quadratic in x.
    for (i128 y = -P_; y <= P_; ++y) {
      const i128 lin = q_.b * y + q_.d;
      const i128 con = q_.c * y * y + q_.e * y + q_.f;
      const i128 disc = lin * lin - 4 * q_.a * con;
      if (!is_perfect_square(disc)) continue;
      const auto r = static_cast<i128>(isqrt(static_cast<u128>(disc)));
      // X = 2ax + lin = +-r
      emit_from_X(r, y);
      if (r != 0) emit_from_X(-r, y);
    }
  }

  // a = c = 0, b != 0: (bx + e)(by + d) = ed - bf.
  void hyperbolic() {
    const i128 b = q_.b;
    const i128 K = q_.e * q_.d - b * q_.f;
    if (K != 0) {
      for (const u128 du : divisors(uabs(K))) {
        const auto u = static_cast<i128>(du);
        for (const i128 u1 : {u, -u}) {
          const i128 u2 = K / u1;
          const auto x = exact_div(u1 - q_.e, b);
          const auto y = exact_div(u2 - q_.d, b);
          if (x && y && in_box(*x, P_) && in_box(*y, P_)) out(*x, *y);
        }
      }
      return;
    }
    // K = 0: the union of the lines bx + e = 0 and by + d = 0.
    const auto x0 = exact_div(-q_.e, b);
    const auto y0 = exact_div(-q_.d, b);
    const bool has_x = x0 && in_box(*x0, P_);
    const bool has_y = y0 && in_box(*y0, P_);
    if (has_x) {
      for (i128 y = -P_; y <= P_; ++y) out(*x0, y);
    }
    if (has_y) {
      for (i128 x = -P_; x <= P_; ++x) {
        if (!(has_x && x == *x0)) out(x, *y0);
      }
    }
  }

  // a = b = c = 0: d x + e y + f = 0.
  void linear() {
    if (q_.d == 0 && q_.e == 0) {
      if (q_.f != 0) return;
      for (i128 x = -P_; x <= P_; ++x) {
        for (i128 y = -P_; y <= P_; ++y) out(x, y);
      }
      return;
    }
    if (q_.e != 0) {
      for (i128 x = -P_; x <= P_; ++x) {
        if (auto y = exact_div(-(q_.d * x + q_.f), q_.e); y && in_box(*y, P_)) out(x, *y);
      }
    } else {
      for (i128 y = -P_; y <= P_; ++y) {
        if (auto x = exact_div(-(q_.e * y + q_.f), q_.d); x && in_box(*x, P_)) out(*x, y);
      }
    }
  }

  const QuadInstance& q_;
  i128 P_;
  Emit& emit_;
  bool swapped_;
};

template <typename Emit>
void solve(const QuadInstance& q, i128 P, Emit& emit) {
  check_ranges(q, P);
  if (q.a == 0 && q.c != 0) {
    // Exchange the roles of x and y so the completed square is in the leading variable.
    const QuadInstance swapped{q.c, q.b, q.a, q.e, q.d, q.f};
    Solver<Emit>(swapped, P, emit, true).run();
  } else {
    Solver<Emit>(q, P, emit, false).run();
  }
}

}  // namespace

QuadCount count_solutions(const QuadInstance& q, i128 P, bool verify) {
  u128 count = 0;
  auto emit = [&count](i128, i128) { ++count; };
  solve(q, P, emit);
  if (verify) {
    const u128 brute = count_solutions_bruteforce(q, P);
    if (brute != count) {
      throw std::logic_error("quadratic fast path disagrees with brute force: " + to_string(count) + " vs " +
                             to_string(brute));
    }
  }
  return {count, classify(q)};
}

std::vector<std::pair<i128, i128>> list_solutions(const QuadInstance& q, i128 P) {
  std::vector<std::pair<i128, i128>> out;
  auto emit = [&out](i128 x, i128 y) { out.emplace_back(x, y); };
  solve(q, P, emit);
  std::sort(out.begin(), out.end());
  return out;
}

u128 count_solutions_bruteforce(const QuadInstance& q, i128 P) {
  check_ranges(q, P);
  u128 count = 0;
  for (i128 x = -P; x <= P; ++x) {
    for (i128 y = -P; y <= P; ++y) {
      if (q.evaluate(x, y) == 0) ++count;
    }
  }
  return count;
}

BoundedCount count_Q(u128 n, u128 a, u128 b) {
  if (n == 0 || a == 0 || b == 0) throw PreconditionError("count_Q needs positive n, a, b");
  u128 count = 0;
  for (u128 x = 1; a * x * x < n; ++x) {
    const u128 rest = n - a * x * x;
    if (rest % b != 0) continue;
    const u128 y2 = rest / b;
    const u128 y = isqrt(y2);
    if (y >= 1 && y * y == y2) ++count;
  }
  return {count, 2.0 * static_cast<double>(divisor_count(n))};
}

BoundedCount count_R(u128 n, u128 a, u128 b, u128 m) {
  if (n == 0 || a == 0 || b == 0 || m == 0) throw PreconditionError("count_R needs positive n, a, b, m");
  u128 count = 0;
  for (u128 x = 1; a * x * x <= m; ++x) {
    const u128 ax2 = a * x * x;
    if (ax2 <= n) continue;
    const u128 rest = ax2 - n;
    if (rest % b != 0) continue;
    const u128 y2 = rest / b;
    const u128 y = isqrt(y2);
    if (y * y == y2) ++count;
  }
  const double bound =
      2.0 * static_cast<double>(divisor_count(n)) * (1.0 + std::log(static_cast<double>(m)));
  return {count, bound};
}

std::vector<std::pair<i128, i128>> squares_in_progression(i128 P, i128 n, i128 b) {
  if (P < 1 || n < 1) throw PreconditionError("squares_in_progression needs P >= 1 and n >= 1");
  std::vector<std::pair<i128, i128>> out;
  const i128 hi = checked_add(checked_mul(n, P), b);
  if (hi < 0) return out;
  const i128 lo = checked_sub(b, checked_mul(n, P));
  i128 z_lo = 0;
  if (lo > 0) {
    z_lo = static_cast<i128>(isqrt(static_cast<u128>(lo)));
    if (z_lo * z_lo < lo) ++z_lo;
  }
  const auto z_hi = static_cast<i128>(isqrt(static_cast<u128>(hi)));
  const i128 target = mod_floor(b, n);
  for (i128 r = 0; r < n; ++r) {
    if (r * r % n != target) continue;
    // First z >= z_lo with z = r (mod n), then step by n.
    for (i128 z = z_lo + mod_floor(r - z_lo, n); z <= z_hi; z += n) {
      out.emplace_back((z * z - b) / n, z);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) { return u.second < v.second; });
  return out;
}

u128 count_S(i128 P, i128 n, i128 b) {
  if (P < 1 || n < 1) throw PreconditionError("count_S needs P >= 1 and n >= 1");
  const i128 hi = checked_add(checked_mul(n, P), b);
  if (hi < 0) return 0;
  const i128 lo = checked_sub(b, checked_mul(n, P));
  i128 z_lo = 0;
  if (lo > 0) {
    z_lo = static_cast<i128>(isqrt(static_cast<u128>(lo)));
    if (z_lo * z_lo < lo) ++z_lo;
  }
  const auto z_hi = static_cast<i128>(isqrt(static_cast<u128>(hi)));
  if (z_lo > z_hi) return 0;
  const i128 target = mod_floor(b, n);
  u128 count = 0;
  for (i128 r = 0; r < n; ++r) {
    if (r * r % n != target) continue;
    const i128 first = z_lo + mod_floor(r - z_lo, n);
    if (first <= z_hi) count += static_cast<u128>((z_hi - first) / n + 1);
  }
  return count;
}

u128 count_S_bruteforce(i128 P, i128 n, i128 b) {
  if (P < 1 || n < 1) throw PreconditionError("count_S needs P >= 1 and n >= 1");
  u128 count = 0;
  for (i128 y = -P; y <= P; ++y) {
    if (is_perfect_square(n * y + b)) ++count;
  }
  return count;
}

}  // namespace sqfree
