#include "sqfree/local_density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "sqfree/arith.hpp"
#include "sqfree/detail/mod_eval.hpp"
#include "sqfree/error.hpp"
#include "sqfree/parallel.hpp"

namespace sqfree {

const char* to_string(DensityMethod m) {
  return m == DensityMethod::BruteForce ? "BruteForce" : "HenselCRT";
}

namespace {

u128 checked_upow(u128 base, unsigned exp) {
  u128 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > (~static_cast<u128>(0)) / base) throw OverflowError("power exceeds 128 bits");
    r *= base;
  }
  return r;
}

// base^exp if it is at most limit, otherwise limit + 1.
u128 saturating_pow(u128 base, unsigned exp, u128 limit) {
  u128 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

// Advances an odometer over [0, radix)^n restricted to `vars`; false at wraparound.
bool next_point(std::vector<std::uint64_t>& x, const std::vector<std::size_t>& vars, std::uint64_t radix) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    if (++x[*it] < radix) return true;
    x[*it] = 0;
  }
  return false;
}

std::vector<std::size_t> all_vars(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Root counting modulo p^e by lifting one level at a time.
class PrimePowerCounter {
 public:
  PrimePowerCounter(const Polynomial& p, std::uint64_t prime, unsigned exponent, const DensityConfig& config)
      : s_(p.num_vars()), prime_(prime), exponent_(exponent), config_(config) {
    std::uint64_t modulus = 1;
    for (unsigned k = 1; k <= exponent; ++k) {
      modulus *= prime;
      level_eval_.emplace_back(p, modulus);
      level_modulus_.push_back(modulus);
    }
    for (std::size_t j = 0; j < s_; ++j) gradient_.emplace_back(p.partial_derivative(j), prime);
  }

  u128 count() {
    if (saturating_pow(prime_, static_cast<unsigned>(s_), config_.max_points) > config_.max_points) {
      throw GuardError("rho: p^s exceeds the enumeration guard for p = " + std::to_string(prime_));
    }
    const u128 nonsingular_lifts = checked_upow(prime_, (exponent_ - 1) * static_cast<unsigned>(s_ - 1));
    const auto vars = all_vars(s_);
    std::vector<std::uint64_t> x(s_, 0);
    u128 total = 0;
    do {
      ++visited_;
      if (level_eval_[0](x.data()) != 0) continue;
      const bool singular = std::all_of(gradient_.begin(), gradient_.end(),
                                        [&](const detail::ModEvaluator& g) { return g(x.data()) == 0; });
      total += singular ? lift_singular(x, 1) : nonsingular_lifts;
    } while (next_point(x, vars, prime_));
    return total;
  }

 private:
  // x is a root modulo p^level with vanishing gradient mod p; counts its
  // descendants modulo p^exponent by trying all p^s extensions per level.
  u128 lift_singular(const std::vector<std::uint64_t>& x, unsigned level) {
    if (level == exponent_) return 1;
    const std::uint64_t step = level_modulus_[level - 1];
    const auto& eval = level_eval_[level];
    const auto vars = all_vars(s_);
    std::vector<std::uint64_t> t(s_, 0), y(s_);
    u128 total = 0;
    do {
      if (++visited_ > config_.max_points) throw GuardError("rho: singular lifting exceeds the enumeration guard");
      for (std::size_t j = 0; j < s_; ++j) y[j] = x[j] + step * t[j];
      if (eval(y.data()) == 0) total += lift_singular(y, level + 1);
    } while (next_point(t, vars, prime_));
    return total;
  }

  std::size_t s_;
  std::uint64_t prime_;
  unsigned exponent_;
  const DensityConfig& config_;
  std::vector<detail::ModEvaluator> level_eval_;
  std::vector<std::uint64_t> level_modulus_;
  std::vector<detail::ModEvaluator> gradient_;
  std::uint64_t visited_ = 0;
};

// One additive block of P: the terms in a connected set of variables.
struct Block {
  std::vector<std::size_t> vars;
  Polynomial poly;
};

std::vector<Block> additive_blocks(const Polynomial& p) {
  const std::size_t n = p.num_vars();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [e, c] : p.terms()) {
    std::size_t first = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (e[j] == 0) continue;
      if (first == n) {
        first = j;
      } else {
        parent[find(j)] = find(first);
      }
    }
  }
  std::map<std::size_t, Block> by_root;
  for (const auto v : p.involved_variables()) {
    auto [it, inserted] = by_root.try_emplace(find(v), Block{{}, Polynomial(n)});
    it->second.vars.push_back(v);
  }
  for (const auto& [e, c] : p.terms()) {
    const auto v = static_cast<std::size_t>(std::find_if(e.begin(), e.end(), [](unsigned x) { return x != 0; }) - e.begin());
    if (v == n) continue;  // constant term
    by_root.at(find(v)).poly += Polynomial(n, {{e, c}});
  }
  std::vector<Block> blocks;
  for (auto& [root, b] : by_root) blocks.push_back(std::move(b));
  return blocks;
}

// Value statistics of one block over (Z/pZ)^{vars}.
struct BlockCounts {
  std::vector<std::uint64_t> all_mod_p;                   // value mod p -> points
  std::map<std::uint64_t, std::uint64_t> singular_mod_p2;  // value mod p^2 -> singular points
};

BlockCounts count_block(const Block& block, std::uint64_t p) {
  const std::uint64_t p2 = p * p;
  const std::size_t sb = block.vars.size();
  BlockCounts out;
  out.all_mod_p.assign(p, 0);

  if (block.poly.degree() == 1) {
    // Linear block sum a_j x_j: uniform mod p unless every a_j vanishes mod p.
    std::vector<i128> a;
    for (const auto v : block.vars) {
      Exponents e(block.poly.num_vars(), 0);
      e[v] = 1;
      a.push_back(block.poly.coefficient(e));
    }
    const auto pi = static_cast<i128>(p);
    const std::uint64_t fiber = static_cast<std::uint64_t>(saturating_pow(p, static_cast<unsigned>(sb - 1), ~static_cast<u128>(0)));
    if (std::any_of(a.begin(), a.end(), [&](i128 c) { return mod_floor(c, pi) != 0; })) {
      std::fill(out.all_mod_p.begin(), out.all_mod_p.end(), fiber);
      return out;
    }
    out.all_mod_p[0] = fiber * p;
    // Every point is singular; the value mod p^2 is p * (sum (a_j/p) x_j mod p).
    if (std::any_of(a.begin(), a.end(), [&](i128 c) { return mod_floor(c / pi, pi) != 0; })) {
      for (std::uint64_t w = 0; w < p; ++w) out.singular_mod_p2[w * p] = fiber;
    } else {
      out.singular_mod_p2[0] = fiber * p;
    }
    return out;
  }

  const detail::ModEvaluator value(block.poly, p2);
  std::vector<detail::ModEvaluator> grad;
  for (const auto v : block.vars) grad.emplace_back(block.poly.partial_derivative(v), p);
  std::vector<std::uint64_t> x(block.poly.num_vars(), 0);
  do {
    const std::uint64_t v = value(x.data());
    ++out.all_mod_p[v % p];
    const bool singular =
        std::all_of(grad.begin(), grad.end(), [&](const detail::ModEvaluator& g) { return g(x.data()) == 0; });
    if (singular) ++out.singular_mod_p2[v];
  } while (next_point(x, block.vars, p));
  return out;
}

}  // namespace

LocalDensity rho_bruteforce(const Polynomial& p, u128 d, const DensityConfig& config) {
  if (d == 0) throw PreconditionError("rho_bruteforce: modulus must be positive");
  const std::size_t s = p.num_vars();
  if (saturating_pow(d, static_cast<unsigned>(s), config.max_points) > config.max_points) {
    throw GuardError("rho_bruteforce: d^s exceeds the enumeration guard");
  }
  const auto m = static_cast<std::uint64_t>(d);
  const detail::ModEvaluator eval(p, m);
  std::vector<std::uint64_t> x(s, 0);
  const auto vars = all_vars(s);
  u128 count = 0;
  do {
    if (eval(x.data()) == 0) ++count;
  } while (next_point(x, vars, m));
  return {d, count, DensityMethod::BruteForce};
}

LocalDensity rho(const Polynomial& p, u128 d, const DensityConfig& config) {
  if (d == 0) throw PreconditionError("rho: modulus must be positive");
  if (d >> 63) throw GuardError("rho: modulus exceeds 63 bits");
  u128 count = 1;
  for (const auto& [prime, exponent] : factorize(d)) {
    PrimePowerCounter counter(p, static_cast<std::uint64_t>(prime), exponent, config);
    const u128 c = counter.count();
    if (c != 0 && count > (~static_cast<u128>(0)) / c) throw OverflowError("rho: count exceeds 128 bits");
    count *= c;
  }
  return {d, count, DensityMethod::HenselCRT};
}

u128 rho_prime_square(const Polynomial& p, std::uint64_t prime, const DensityConfig& config) {
  if (prime < 2 || !is_prime_u64(prime)) throw PreconditionError("rho_prime_square needs a prime");
  if (prime >= (std::uint64_t{1} << 31)) throw GuardError("rho_prime_square: prime exceeds 31 bits");
  const std::uint64_t p2 = prime * prime;
  const std::size_t s = p.num_vars();
  const auto blocks = additive_blocks(p);

  std::size_t s_involved = 0;
  u128 work = prime;
  for (const auto& b : blocks) {
    s_involved += b.vars.size();
    if (b.poly.degree() > 1) work += saturating_pow(prime, static_cast<unsigned>(b.vars.size()), config.max_points);
  }
  if (blocks.size() > 1) work += static_cast<u128>(blocks.size() - 1) * prime * prime;
  if (work > config.max_points) {
    throw GuardError("rho_prime_square: enumeration guard exceeded at p = " + std::to_string(prime));
  }
  const u128 free_factor = checked_upow(p2, static_cast<unsigned>(s - s_involved));
  const auto target_p2 = static_cast<std::uint64_t>(mod_floor(checked_sub(0, p.constant_term()), static_cast<i128>(p2)));
  const std::uint64_t target_p = target_p2 % prime;

  if (blocks.empty()) return target_p2 == 0 ? checked_upow(p2, static_cast<unsigned>(s)) : 0;

  // Convolve value counts mod p over all blocks (cyclic), and the singular
  // value counts mod p^2 (sparse).
  std::vector<u128> all(prime, 0);
  std::map<std::uint64_t, u128> singular{{0, 1}};
  all[0] = 1;
  for (const auto& block : blocks) {
    const BlockCounts bc = count_block(block, prime);
    std::vector<u128> next(prime, 0);
    for (std::uint64_t a = 0; a < prime; ++a) {
      if (all[a] == 0) continue;
      for (std::uint64_t b = 0; b < prime; ++b) {
        if (bc.all_mod_p[b] == 0) continue;
        const std::uint64_t idx = a + b >= prime ? a + b - prime : a + b;
        next[idx] += all[a] * bc.all_mod_p[b];
      }
    }
    all = std::move(next);
    std::map<std::uint64_t, u128> next_singular;
    for (const auto& [a, ca] : singular) {
      for (const auto& [b, cb] : bc.singular_mod_p2) next_singular[(a + b) % p2] += ca * cb;
    }
    singular = std::move(next_singular);
  }

  u128 roots = all[target_p];
  u128 singular_roots = 0;
  u128 singular_roots_p2 = 0;
  for (const auto& [v, c] : singular) {
    if (v % prime == target_p) singular_roots += c;
    if (v == target_p2) singular_roots_p2 += c;
  }
  const auto si = static_cast<unsigned>(s_involved);
  const u128 count = (roots - singular_roots) * checked_upow(prime, si - 1) + singular_roots_p2 * checked_upow(prime, si);
  return count * free_factor;
}

std::vector<std::uint64_t> fixed_square_divisor_primes(const Polynomial& p, std::uint64_t prime_bound,
                                                       const DensityConfig& config) {
  if (prime_bound < 2) throw PreconditionError("fixed_square_divisor_primes: prime bound must be >= 2");
  const auto primes = primes_up_to(prime_bound);
  std::vector<u128> counts(primes.size());
  parallel_for(primes.size(), config.threads, [&](std::size_t i) { counts[i] = rho_prime_square(p, primes[i], config); });
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (counts[i] == checked_upow(static_cast<u128>(primes[i]) * primes[i], static_cast<unsigned>(p.num_vars()))) {
      out.push_back(primes[i]);
    }
  }
  return out;
}

SingularSeriesReport singular_series(const Polynomial& p, std::uint64_t cutoff, const DensityConfig& config) {
  if (cutoff < 2) throw PreconditionError("singular_series: cutoff must be >= 2");
  const auto primes = primes_up_to(cutoff);
  const auto s = static_cast<unsigned>(p.num_vars());
  std::vector<u128> counts(primes.size());
  parallel_for(primes.size(), config.threads, [&](std::size_t i) { counts[i] = rho_prime_square(p, primes[i], config); });

  SingularSeriesReport report;
  report.cutoff = cutoff;
  report.num_vars = p.num_vars();
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::uint64_t q = primes[i];
    const u128 full = checked_upow(static_cast<u128>(q) * q, s);
    report.factors.push_back({q, counts[i]});
    if (counts[i] == full) report.zero_factor_primes.push_back(q);
    report.truncated_value = report.truncated_value * UnitFixed::ratio(full - counts[i], full);
    const double ratio = static_cast<double>(counts[i]) / std::pow(static_cast<double>(q), 2.0 * s - 2.0);
    max_ratio = std::max(max_ratio, ratio);
  }
  report.tail_bound = 2.0 * max_ratio / static_cast<double>(cutoff - 1);
  report.rounding_error = std::ldexp(2.0 * static_cast<double>(primes.size()), -65);
  return report;
}

UnitFixed truncated_product(const SingularSeriesReport& report, std::uint64_t cutoff) {
  UnitFixed value = UnitFixed::one();
  const auto s = static_cast<unsigned>(report.num_vars);
  for (const auto& f : report.factors) {
    if (f.prime > cutoff) break;
    const u128 full = checked_upow(static_cast<u128>(f.prime) * f.prime, s);
    value = value * UnitFixed::ratio(full - f.rho_p2, full);
  }
  return value;
}

namespace {

std::string decimal_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

std::string to_json(const SingularSeriesReport& report) {
  nlohmann::ordered_json j;
  j["cutoff"] = report.cutoff;
  j["value"] = report.truncated_value.to_decimal(20);
  j["zero_factor_primes"] = report.zero_factor_primes;
  auto factors = nlohmann::ordered_json::array();
  for (const auto& f : report.factors) {
    nlohmann::ordered_json row;
    row["p"] = f.prime;
    if (f.rho_p2 >> 64) {
      row["rho_p2"] = to_string(f.rho_p2);
    } else {
      row["rho_p2"] = static_cast<std::uint64_t>(f.rho_p2);
    }
    factors.push_back(std::move(row));
  }
  j["factors"] = std::move(factors);
  j["tail_bound"] = decimal_string(report.tail_bound);
  j["tail_bound_is_heuristic"] = true;
  return j.dump(2);
}

Polynomial mixed_power_polynomial(i128 c, unsigned k, const Polynomial& cstar) {
  if (c == 0) throw PreconditionError("leading coefficient c must be nonzero");
  if (k != 3 && k != 4) throw PreconditionError("exponent k must be 3 or 4");
  const std::size_t s = cstar.num_vars();
  if (s < 3) throw PreconditionError("C* must be a form in x2..xs with s - 1 >= 2");
  if (!cstar.is_cubic_form()) throw PreconditionError("C* must be a nonzero cubic form");
  if (cstar.max_exponent(0) != 0) throw PreconditionError("C* must not involve x1");
  if (is_scaled_linear_cube(cstar)) throw PreconditionError("C* is a multiple of the cube of a linear form");
  Exponents e(s, 0);
  e[0] = k;
  return Polynomial(s, {{e, c}}) + cstar;
}

Lemma25Table lemma25_bound_check(i128 c, unsigned k, const Polynomial& cstar, std::uint64_t prime_bound,
                                 const DensityConfig& config) {
  Lemma25Table table{mixed_power_polynomial(c, k, cstar), {}, 0.0};
  const auto primes = primes_up_to(prime_bound);
  std::vector<u128> counts(primes.size());
  parallel_for(primes.size(), config.threads,
               [&](std::size_t i) { counts[i] = rho_prime_square(table.polynomial, primes[i], config); });
  const double exponent = 2.0 * static_cast<double>(table.polynomial.num_vars()) - 2.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double ratio = static_cast<double>(counts[i]) / std::pow(static_cast<double>(primes[i]), exponent);
    table.rows.push_back({primes[i], counts[i], ratio});
    table.max_ratio = std::max(table.max_ratio, ratio);
  }
  return table;
}

}  // namespace sqfree
