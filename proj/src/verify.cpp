#include "sqfree/verify.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "sqfree/arith.hpp"
#include "sqfree/collision_stats.hpp"
#include "sqfree/error.hpp"
#include "sqfree/local_density.hpp"
#include "sqfree/parallel.hpp"
#include "sqfree/polynomial.hpp"
#include "sqfree/quad_diophantine.hpp"
#include "sqfree/squarefree_count.hpp"

namespace sqfree {

namespace {

struct CorpusEntry {
  const char* text;
  std::size_t arity;
};

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"x1", 1},
      {"4*x1", 2},
      {"x1*x2", 2},
      {"x1^2 + x2^2", 2},
      {"x1^3 + 2*x2^3", 2},
      {"x1^3 + x2^3 + x2*x3^2", 3},
      {"x1^4 + x2^3 + x2^2*x3 + x3^3", 3},
      {"x1^2", 1},
      {"2*x1^2 + 2*x1 + 2*x2^2 + 2*x2 + 4", 2},
      {"x1^2 + 1", 1},
      {"x1^2 - 2", 1},
      {"x1^3 - x1", 1},
      {"x1^2 + x2^2 + x3^2", 3},
      {"x1*x2 - x3^2", 3},
      {"3*x1^3 + 5*x2^3", 2},
      {"x1^3 + x2^3 + x3^3", 3},
      {"x1^2*x2 + x2^2*x3", 3},
      {"9*x1 + 3", 1},
      {"x1^2 + x1*x2 + x2^2", 2},
      {"x1^4 + x2^4", 2},
      {"2*x1^3 + x1*x2^2 + 7", 2},
      {"x1^3 - 3*x1*x2^2", 2},
      {"12*x1^2 + 6", 1},
  };
  return entries;
}

std::string fraction(u128 bad, u128 total) {
  return to_string(bad) + " mismatches in " + to_string(total) + " cases";
}

SuiteResult quad_suite(unsigned threads) {
  std::atomic<std::uint64_t> bad{0}, total{0};
  parallel_for(7, threads, [&](std::size_t ia) {
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d)
          for (int e = -3; e <= 3; ++e)
            for (int f = -3; f <= 3; ++f) {
              const QuadInstance q{static_cast<int>(ia) - 3, b, c, d, e, f};
              for (i128 P : {5, 12}) {
                ++total;
                if (count_solutions(q, P).count != count_solutions_bruteforce(q, P)) ++bad;
              }
            }
  });
  return {"quad", bad == 0, fraction(bad, total)};
}

SuiteResult classify_suite(unsigned threads) {
  std::atomic<std::uint64_t> bad{0}, total{0}, fives{0}, twos{0};
  parallel_for(9, threads, [&](std::size_t ia) {
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c)
        for (int d = -4; d <= 4; ++d)
          for (int e = -4; e <= 4; ++e)
            for (int f = -4; f <= 4; ++f) {
              const QuadInstance q{static_cast<int>(ia) - 4, b, c, d, e, f};
              ++total;
              QuadCase qc;
              try {
                qc = classify(q);
              } catch (...) {
                ++bad;
                continue;
              }
              if (qc.tag == QuadTag::V) {
                ++fives;
                if (count_solutions_bruteforce(q, 12) != 0) ++bad;
              } else if (qc.tag == QuadTag::II) {
                ++twos;
                if (count_solutions_bruteforce(q, 12) > 1) ++bad;
              }
            }
  });
  return {"classify", bad == 0,
          fraction(bad, total) + " (" + std::to_string(fives) + " case V, " + std::to_string(twos) + " case II)"};
}

SuiteResult rho_suite(unsigned threads) {
  const auto& polys = corpus();
  std::vector<std::uint64_t> bad(polys.size(), 0);
  parallel_for(polys.size(), threads, [&](std::size_t i) {
    const Polynomial p = parse_polynomial(polys[i].text, polys[i].arity);
    for (u128 d = 1; d <= 36; ++d) {
      if (rho(p, d).count != rho_bruteforce(p, d).count) ++bad[i];
    }
  });
  std::uint64_t mismatches = 0;
  for (auto v : bad) mismatches += v;

  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> pick_poly(0, static_cast<int>(polys.size()) - 1);
  std::uniform_int_distribution<std::uint64_t> pick_d(2, 400);
  std::uint64_t split_bad = 0;
  for (int trial = 0; trial < 200;) {
    const std::uint64_t d1 = pick_d(rng), d2 = pick_d(rng);
    if (gcd(d1, d2) != 1) continue;
    ++trial;
    const auto& entry = polys[static_cast<std::size_t>(pick_poly(rng))];
    const Polynomial p = parse_polynomial(entry.text, entry.arity);
    if (rho(p, static_cast<u128>(d1) * d2).count != rho(p, d1).count * rho(p, d2).count) ++split_bad;
  }
  return {"rho", mismatches == 0 && split_bad == 0,
          fraction(mismatches, polys.size() * 36) + "; " + fraction(split_bad, 200) + " on coprime splits"};
}

// The largest cube with at most 10^5 points whose values stay below 10^10.
Box corpus_box(const Polynomial& p) {
  const std::size_t s = p.num_vars();
  i128 P = 1;
  for (i128 step = 1 << 16; step > 0; step /= 2) {
    const Box candidate = Box::cube(s, P + step);
    if (candidate.cardinality() <= 100'000 && BoxEvaluator(p, candidate).max_abs_bound() <= 10'000'000'000) {
      P += step;
    }
  }
  return Box::cube(s, P);
}

SuiteResult moebius_suite(unsigned threads) {
  std::uint64_t bad = 0;
  CountConfig config;
  config.threads = threads;
  for (const auto& entry : corpus()) {
    const Polynomial p = parse_polynomial(entry.text, entry.arity);
    for (const Box& box : {corpus_box(p), Box::cube(p.num_vars(), 3)}) {
      if (count_exact(p, box, config).exact_count != count_sieve(p, box, config).exact_count) ++bad;
    }
  }
  return {"moebius", bad == 0, fraction(bad, corpus().size() * 2)};
}

SuiteResult density_suite(unsigned threads) {
  CountConfig config;
  config.threads = threads;
  const Polynomial p = parse_polynomial("x1");
  const auto report = asymptotic_report(p, Box::cube(1, 2000), 10'000, config);
  const double series = singular_series(p, 100'000, config.density()).truncated_value.to_double();
  const double gap = std::fabs(series - 6.0 / (std::numbers::pi * std::numbers::pi));
  std::ostringstream detail;
  detail << "relative error " << decimal(report.relative_error, 6) << ", |S - 6/pi^2| = " << gap;
  return {"density", report.relative_error < 0.01 && gap < 1e-4, detail.str()};
}

SuiteResult thm13_suite(unsigned threads) {
  CountConfig config;
  config.threads = threads;
  bool ok = true;
  std::string detail;
  for (const auto& [text, arity] : {CorpusEntry{"4*x1", 2}, CorpusEntry{"2*x1^2 + 2*x1 + 2*x2^2 + 2*x2 + 4", 2}}) {
    const Polynomial p = parse_polynomial(text, arity);
    const auto table = theorem13_experiment(p, {Box::cube(2, 10), Box::cube(2, 50), Box::cube(2, 100)}, 100, 1e-3, config);
    ok = ok && table.zero_factor_primes == std::vector<std::uint64_t>{2};
    for (const auto& row : table.rows) ok = ok && row.count == 0 && row.within_bound;
    detail += std::string(detail.empty() ? "" : "; ") + text + ": zero_factor_primes " +
              std::to_string(table.zero_factor_primes.size());
  }
  return {"thm13", ok, detail};
}

SuiteResult lemmas_suite(unsigned) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick_n(1, 100'000), pick_ab(1, 20);
  std::uint64_t q_bad = 0, r_bad = 0;
  for (int i = 0; i < 10'000; ++i) {
    const u128 n = pick_n(rng), a = pick_ab(rng), b = pick_ab(rng);
    if (!count_Q(n, a, b).within_bound()) ++q_bad;
  }
  for (int i = 0; i < 10'000; ++i) {
    const u128 n = pick_n(rng), a = pick_ab(rng), b = pick_ab(rng), m = pick_n(rng) * 10;
    if (!count_R(n, a, b, m).within_bound()) ++r_bad;
  }
  return {"lemmas", q_bad == 0 && r_bad == 0,
          "Q: " + fraction(q_bad, 10'000) + "; R: " + fraction(r_bad, 10'000)};
}

SuiteResult count_s_suite(unsigned) {
  std::uint64_t bad = 0, total = 0;
  for (i128 P : {10, 200})
    for (i128 n = 1; n <= 50; ++n)
      for (i128 b = -50; b <= 50; ++b) {
        ++total;
        if (count_S(P, n, b) != count_S_bruteforce(P, n, b)) ++bad;
      }
  return {"count_s", bad == 0, fraction(bad, total)};
}

SuiteResult collisions_suite(unsigned threads) {
  EnumerationConfig config;
  config.threads = threads;
  auto samples_for = [&](const Polynomial& p, bool degenerate) {
    std::vector<std::pair<i128, u128>> samples;
    for (i128 P : {8, 16, 32, 64}) samples.emplace_back(P, collision_count_M(p, P, degenerate, config).count);
    return samples;
  };
  const auto fit = exponent_fit(samples_for(parse_polynomial("x1^3 + 2*x2^3"), false), 2.0);
  const auto control = exponent_fit(samples_for(parse_polynomial("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3"), true), 2.0);
  std::ostringstream detail;
  detail << "slope " << fit.slope << ", degenerate control slope " << control.slope;
  return {"collisions", fit.slope >= 1.8 && fit.slope <= 2.4 && control.slope >= 2.5, detail.str()};
}

SuiteResult thm14_suite(unsigned threads) {
  CountConfig config;
  config.threads = threads;
  const auto table = theorem14_experiment(1, 3, parse_polynomial("x2^3 + x2*x3^2", 3), {8, 16, 24}, 1000, false, config);
  bool ok = true;
  std::ostringstream detail;
  detail << "relative errors";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long double e = table.rows[i].relative_error;
    detail << " " << decimal(e, 5);
    ok = ok && std::isfinite(static_cast<double>(e));
    if (i > 0) ok = ok && e <= table.rows[i - 1].relative_error;
  }
  ok = ok && table.rows.back().relative_error < 0.15;
  return {"thm14", ok, detail.str()};
}

// Forms in a single variable lie outside the domain and must be refused.
bool exposure_ok(const Polynomial& p) {
  if (p.involved_variables().size() < 2) {
    try {
      make_cubes_explicit(p);
    } catch (const PreconditionError&) {
      return true;
    }
    return false;
  }
  const auto result = make_cubes_explicit(p);
  const std::size_t s = p.num_vars();
  Exponents e1(s, 0), e2(s, 0);
  e1[0] = 3;
  e2[1] = 3;
  const i128 det = result.map.determinant();
  return (det == 1 || det == -1) && result.form == substitute_unimodular(p, result.map) &&
         result.form.coefficient(e1) != 0 && result.form.coefficient(e2) != 0;
}

std::vector<Exponents> cubic_monomials(std::size_t s) {
  std::vector<Exponents> out;
  std::function<void(std::size_t, unsigned, Exponents&)> rec = [&](std::size_t j, unsigned left, Exponents& e) {
    if (j + 1 == s) {
      e[j] = left;
      out.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[j] = k;
      rec(j + 1, left - k, e);
    }
  };
  Exponents e(s, 0);
  rec(0, 3, e);
  return out;
}

SuiteResult cubes_suite(unsigned) {
  std::uint64_t bad = 0, total = 0;
  const auto mono2 = cubic_monomials(2);
  std::vector<int> digits(mono2.size(), -2);
  for (;;) {
    Polynomial::TermMap terms;
    for (std::size_t i = 0; i < mono2.size(); ++i) {
      if (digits[i] != 0) terms[mono2[i]] = digits[i];
    }
    if (!terms.empty()) {
      ++total;
      if (!exposure_ok(Polynomial(2, terms))) ++bad;
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] > 2) digits[i++] = -2;
    if (i == digits.size()) break;
  }
  const auto mono3 = cubic_monomials(3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int sample = 0; sample < 500;) {
    Polynomial::TermMap terms;
    for (const auto& m : mono3) {
      const int c = coeff(rng);
      if (c != 0) terms[m] = c;
    }
    if (terms.empty()) continue;
    ++sample;
    ++total;
    if (!exposure_ok(Polynomial(3, terms))) ++bad;
  }
  return {"cubes", bad == 0, fraction(bad, total)};
}

using SuiteFn = SuiteResult (*)(unsigned);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"quad", quad_suite},         {"classify", classify_suite}, {"rho", rho_suite},
      {"moebius", moebius_suite},   {"density", density_suite},   {"thm13", thm13_suite},
      {"lemmas", lemmas_suite},     {"count_s", count_s_suite},   {"collisions", collisions_suite},
      {"thm14", thm14_suite},       {"cubes", cubes_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, unsigned threads) {
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn(threads);
  }
  throw PreconditionError("unknown suite '" + name + "'");
}

}  // namespace sqfree
