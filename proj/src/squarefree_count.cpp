#include "sqfree/squarefree_count.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sqfree/arith.hpp"
#include "sqfree/error.hpp"
#include "sqfree/parallel.hpp"

namespace sqfree {

const char* to_string(CountMethod m) {
  return m == CountMethod::Factorization ? "Factorization" : "MoebiusSieve";
}

std::string decimal(long double v, int significant) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*Lg", significant, v);
  return buf;
}

namespace {

using json = nlohmann::ordered_json;

json box_json(const Box& box) {
  json a = json::array();
  for (i128 b : box.bounds()) a.push_back(to_string(b));
  return a;
}

long double box_volume(const Box& box) {
  long double v = 1;
  for (i128 b : box.bounds()) v *= static_cast<long double>(b);
  return v;
}

void attach_prediction(CountReport& r, const SingularSeriesReport& series) {
  r.cutoff = series.cutoff;
  r.series = series.truncated_value;
  const long double scale = std::ldexp(box_volume(r.box), static_cast<int>(r.box.size()));
  r.predicted = scale * static_cast<long double>(series.truncated_value.raw()) /
                static_cast<long double>(UnitFixed::kOne);
  if (r.predicted > 0) {
    r.relative_error = std::fabs(static_cast<long double>(r.exact_count) - r.predicted) / r.predicted;
    r.exact_match = false;
  } else {
    r.relative_error = r.exact_count == 0 ? 0 : std::numeric_limits<long double>::infinity();
    r.exact_match = r.exact_count == 0;
  }
}

}  // namespace

CountReport count_exact(const Polynomial& p, const Box& box, const CountConfig& config) {
  const auto ecfg = config.enumeration();
  check_box_guard(box, ecfg);
  const BoxEvaluator eval(p, box);
  const std::size_t slices = eval.slice_count();
  std::vector<u128> squarefree(slices, 0), zeros(slices, 0), points(slices, 0);
  parallel_for(slices, config.threads, [&](std::size_t s) {
    eval.for_each_in_slice(s, [&](i128 v) {
      ++points[s];
      if (v == 0) {
        ++zeros[s];
      } else if (is_squarefree(v)) {
        ++squarefree[s];
      }
    });
  });
  CountReport r{box};
  r.method = CountMethod::Factorization;
  for (std::size_t s = 0; s < slices; ++s) {
    r.exact_count += squarefree[s];
    r.zero_value_points += zeros[s];
    r.total_points += points[s];
  }
  return r;
}

CountReport count_sieve(const Polynomial& p, const Box& box, const CountConfig& config) {
  const auto ecfg = config.enumeration();
  const ValueTable table = build_value_table(p, box, ecfg);
  CountReport r{box};
  r.method = CountMethod::MoebiusSieve;
  r.total_points = table.total_points;
  r.zero_value_points = table.multiplicity(0);
  // The exact maximum is known only after enumeration; the coefficient bound can overshoot badly.
  const u128 max_abs = std::max(uabs(table.entries.front().first), uabs(table.entries.back().first));
  if (max_abs > config.max_value) {
    throw GuardError("value range " + to_string(max_abs) + " exceeds the sieve guard " + to_string(config.max_value));
  }
  const auto dmax = static_cast<std::uint64_t>(isqrt(max_abs));
  const auto mu = moebius_table(dmax);
  const auto& entries = table.entries;

  // Points with d^2 | P(x), P(x) != 0, found by alternating between the next
  // table entry and the next multiple of d^2.
  auto multiples = [&](std::uint64_t d) {
    const i128 step = static_cast<i128>(d) * static_cast<i128>(d);
    u128 count = 0;
    auto it = entries.begin();
    while (it != entries.end()) {
      const i128 v = it->first;
      const i128 m = floor_div(v + step - 1, step) * step;
      if (m == v) {
        if (v != 0) count += it->second;
        ++it;
      } else {
        it = std::lower_bound(it, entries.end(), m, [](const auto& e, i128 x) { return e.first < x; });
      }
    }
    return count;
  };

  constexpr std::uint64_t kChunk = 256;
  const std::size_t chunks = static_cast<std::size_t>(dmax / kChunk + 1);
  std::vector<i128> partial(chunks, 0);
  parallel_for(chunks, config.threads, [&](std::size_t c) {
    i128 sum = 0;
    const std::uint64_t lo = std::max<std::uint64_t>(1, c * kChunk);
    const std::uint64_t hi = std::min<std::uint64_t>(dmax, (c + 1) * kChunk - 1);
    for (std::uint64_t d = lo; d <= hi; ++d) {
      if (mu[d] == 0) continue;
      sum += static_cast<i128>(mu[d]) * static_cast<i128>(multiples(d));
    }
    partial[c] = sum;
  });
  i128 total = 0;
  for (i128 v : partial) total += v;
  r.exact_count = static_cast<u128>(total);
  return r;
}

CountReport asymptotic_report(const Polynomial& p, const Box& box, std::uint64_t cutoff, const CountConfig& config) {
  CountReport r = count_exact(p, box, config);
  attach_prediction(r, singular_series(p, cutoff, config.density()));
  return r;
}

std::string to_json(const CountReport& r) {
  json j;
  j["box"] = box_json(r.box);
  j["method"] = to_string(r.method);
  j["exact_count"] = to_string(r.exact_count);
  j["total_points"] = to_string(r.total_points);
  j["zero_value_points"] = to_string(r.zero_value_points);
  if (r.cutoff) {
    j["cutoff"] = *r.cutoff;
    j["series"] = r.series->to_decimal(20);
    j["predicted_main_term"] = decimal(r.predicted);
    j["relative_error"] = decimal(r.relative_error);
    j["exact_match"] = r.exact_match;
  }
  return j.dump(2);
}

std::string histogram_csv(const ValueTable& table) {
  std::string out = "n,R\n";
  for (const auto& [v, c] : table.entries) out += to_string(v) + "," + to_string(c) + "\n";
  return out;
}

Theorem13Table theorem13_experiment(const Polynomial& p, const std::vector<Box>& boxes, std::uint64_t cutoff,
                                    double threshold, const CountConfig& config) {
  const auto series = singular_series(p, cutoff, config.density());
  if (series.zero_factor_primes.empty() && series.truncated_value.to_double() >= threshold) {
    throw PreconditionError("truncated series " + series.truncated_value.to_decimal(12) +
                            " is not below the threshold and no prime square divides every value");
  }
  Theorem13Table table{p, cutoff, series.truncated_value, series.zero_factor_primes, {}};
  const auto s = static_cast<unsigned>(p.num_vars());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& box = boxes[i];
    if (i > 0 && !std::ranges::equal(boxes[i - 1].bounds(), box.bounds(), std::less_equal<>{})) {
      throw PreconditionError("boxes must increase coordinatewise");
    }
    const CountReport r = count_exact(p, box, config);
    Theorem13Row row{box, r.exact_count, r.total_points};
    row.density = static_cast<long double>(r.exact_count) / static_cast<long double>(r.total_points);

    // Whether p^2 | P(x) for all primes p <= q depends only on x mod D^2, so
    // the box holds at most T(q) D^(2s) prod ceil(L_j / D^2) points that avoid them.
    long double T = 1, D2 = 1, best = 1;
    long double min_L = std::numeric_limits<long double>::infinity();
    for (i128 b : box.bounds()) min_L = std::min(min_L, 2 * static_cast<long double>(b) + 1);
    for (const auto& f : series.factors) {
      const long double q2 = static_cast<long double>(f.prime) * static_cast<long double>(f.prime);
      const long double full = std::pow(q2, static_cast<long double>(s));
      T *= (full - static_cast<long double>(f.rho_p2)) / full;
      D2 *= q2;
      if (D2 > 1e6L * min_L && T > 0) break;
      long double bound = T;
      for (i128 b : box.bounds()) bound *= 1 + D2 / (2 * static_cast<long double>(b) + 1);
      best = std::min(best, bound);
      if (T == 0) break;
    }
    row.upper_bound = best;
    row.within_bound = best == 0 ? r.exact_count == 0 : row.density <= best * (1 + 1e-12L);
    table.rows.push_back(row);
  }
  return table;
}

std::string to_json(const Theorem13Table& t) {
  json j;
  j["polynomial"] = render(t.polynomial);
  j["cutoff"] = t.cutoff;
  j["series"] = t.series.to_decimal(20);
  j["zero_factor_primes"] = t.zero_factor_primes;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["box"] = box_json(r.box);
    row["count"] = to_string(r.count);
    row["total_points"] = to_string(r.total_points);
    row["density"] = decimal(r.density);
    row["upper_bound"] = decimal(r.upper_bound);
    row["within_bound"] = r.within_bound;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

i128 mixed_box_height(i128 P, unsigned k) {
  if (P < 1) throw PreconditionError("P must be positive");
  if (k == 3) return P;
  if (k != 4) throw PreconditionError("exponent k must be 3 or 4");
  // Q = round(P^(3/4)) <=> (2Q - 1)^4 <= 16 P^3 < (2Q + 1)^4.
  const i128 target = checked_mul(16, checked_pow(P, 3));
  i128 Q = static_cast<i128>(std::llround(std::pow(static_cast<long double>(P), 0.75L)));
  auto fourth = [](i128 v) { return checked_pow(v, 4); };
  while (Q > 0 && fourth(2 * Q - 1) > target) --Q;
  while (fourth(2 * Q + 1) <= target) ++Q;
  return Q;
}

namespace {

BandDiagnostic band_diagnostic(const Polynomial& poly, const Box& box, i128 c, i128 P, i128 Q,
                               const CountConfig& config) {
  BandDiagnostic diag;
  const long double lnP = std::log(static_cast<long double>(P));
  diag.X = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::floor(lnP / 3)));
  const double X = static_cast<double>(diag.X);
  const double sqrtP = std::sqrt(static_cast<double>(P));
  const double cQ = static_cast<double>(uabs(c)) * static_cast<double>(Q);
  const double P89 = std::pow(static_cast<double>(P), 8.0 / 9.0);
  const double inf = std::numeric_limits<double>::infinity();
  const double edges[][2] = {{X, sqrtP}, {sqrtP, cQ}, {cQ, P89}, {P89, inf}};
  for (const auto& e : edges) diag.bands.push_back({e[0], e[1], !(e[0] < e[1]), 0});

  const ValueTable table = build_value_table(poly, box, config.enumeration());
  diag.N0 = 0;
  for (const auto& [v, mult] : table.entries) {
    if (v == 0) continue;
    bool small_square = false;
    std::vector<bool> hit(diag.bands.size(), false);
    for (const auto& pp : factorize(uabs(v))) {
      if (pp.exponent < 2) continue;
      const double q = static_cast<double>(pp.prime);
      if (q <= X) small_square = true;
      for (std::size_t b = 0; b < diag.bands.size(); ++b) {
        if (!diag.bands[b].empty && q > diag.bands[b].lower && q <= diag.bands[b].upper) hit[b] = true;
      }
    }
    if (!small_square) diag.N0 += mult;
    for (std::size_t b = 0; b < hit.size(); ++b) {
      if (hit[b]) diag.bands[b].count += mult;
    }
  }
  return diag;
}

}  // namespace

Theorem14Table theorem14_experiment(i128 c, unsigned k, const Polynomial& cstar, const std::vector<i128>& P_values,
                                    std::uint64_t cutoff, bool with_diagnostic, const CountConfig& config) {
  const Polynomial poly = mixed_power_polynomial(c, k, cstar);
  const auto series = singular_series(poly, cutoff, config.density());
  Theorem14Table table{poly, cutoff, series.truncated_value, {}};
  const std::size_t s = poly.num_vars();
  for (i128 P : P_values) {
    const i128 Q = mixed_box_height(P, k);
    std::vector<i128> bounds(s, P);
    bounds[0] = Q;
    const Box box(bounds);
    CountReport r = count_exact(poly, box, config);
    attach_prediction(r, series);
    Theorem14Row row{P, Q, r.exact_count, r.predicted, r.relative_error, std::nullopt};
    if (with_diagnostic) row.diagnostic = band_diagnostic(poly, box, c, P, Q, config);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string theorem14_csv(const Theorem14Table& t) {
  std::string out = "P,Q,N_exact,predicted,rel_error\n";
  for (const auto& r : t.rows) {
    out += to_string(r.P) + "," + to_string(r.Q) + "," + to_string(r.count) + "," + decimal(r.predicted) + "," +
           decimal(r.relative_error) + "\n";
  }
  return out;
}

std::string to_json(const Theorem14Table& t) {
  json j;
  j["polynomial"] = render(t.polynomial);
  j["cutoff"] = t.cutoff;
  j["series"] = t.series.to_decimal(20);
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["P"] = to_string(r.P);
    row["Q"] = to_string(r.Q);
    row["N_exact"] = to_string(r.count);
    row["predicted"] = decimal(r.predicted);
    row["rel_error"] = decimal(r.relative_error);
    if (r.diagnostic) {
      json d;
      d["X"] = r.diagnostic->X;
      d["N0"] = to_string(r.diagnostic->N0);
      json bands = json::array();
      for (const auto& b : r.diagnostic->bands) {
        json band;
        band["lower"] = decimal(b.lower);
        band["upper"] = decimal(b.upper);
        band["empty"] = b.empty;
        band["count"] = to_string(b.count);
        bands.push_back(std::move(band));
      }
      d["bands"] = std::move(bands);
      row["diagnostic"] = std::move(d);
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

}  // namespace sqfree
