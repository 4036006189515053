#include "sqfree/enumeration.hpp"

#include <algorithm>
#include <unordered_map>

#include "sqfree/error.hpp"
#include "sqfree/parallel.hpp"

namespace sqfree {

namespace {

// Evaluation without per-operation checks is safe below this bound.
constexpr i128 kUncheckedLimit = i128{1} << 125;

struct I128Hash {
  std::size_t operator()(i128 v) const noexcept {
    const auto u = static_cast<u128>(v);
    const auto lo = static_cast<std::uint64_t>(u);
    const auto hi = static_cast<std::uint64_t>(u >> 64);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

i128 saturating_add(i128 a, i128 b) {
  i128 r;
  return __builtin_add_overflow(a, b, &r) ? kI128Max : r;
}

i128 saturating_mul(i128 a, i128 b) {
  i128 r;
  return __builtin_mul_overflow(a, b, &r) ? kI128Max : r;
}

}  // namespace

void check_box_guard(const Box& box, const EnumerationConfig& config) {
  u128 total = 0;
  try {
    total = box.cardinality();
  } catch (const OverflowError&) {
    throw GuardError("box cardinality exceeds 128 bits");
  }
  if (total > config.max_points) {
    throw GuardError("box has " + to_string(total) + " points, above the guard of " + to_string(config.max_points));
  }
}

BoxEvaluator::BoxEvaluator(const Polynomial& p, const Box& box) : box_(box) {
  if (box.size() != p.num_vars()) throw DimensionError("box dimension differs from num_vars");
  const std::size_t n = p.num_vars();
  powers_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const unsigned top = p.max_exponent(j);
    const i128 P = box.bound(j);
    auto& table = powers_[j];
    table.resize(static_cast<std::size_t>(2 * P + 1));
    for (i128 x = -P; x <= P; ++x) {
      auto& row = table[static_cast<std::size_t>(x + P)];
      row.resize(top + 1);
      row[0] = 1;
      for (unsigned e = 1; e <= top; ++e) row[e] = saturating_mul(row[e - 1], x);
    }
  }
  for (const auto& [e, c] : p.terms()) {
    Term t{c, {}};
    i128 magnitude = static_cast<i128>(uabs(c));
    for (std::size_t j = 0; j < n; ++j) {
      if (e[j] == 0) continue;
      t.factors.emplace_back(j, e[j]);
      for (unsigned k = 0; k < e[j]; ++k) magnitude = saturating_mul(magnitude, box.bound(j));
    }
    bound_ = saturating_add(bound_, magnitude);
    terms_.push_back(std::move(t));
  }
  needs_checks_ = bound_ >= kUncheckedLimit;
}

i128 BoxEvaluator::value_at(const std::vector<i128>& offsets) const {
  i128 total = 0;
  if (!needs_checks_) {
    for (const auto& t : terms_) {
      i128 v = t.coeff;
      for (const auto& [j, e] : t.factors) v *= powers_[j][static_cast<std::size_t>(offsets[j])][e];
      total += v;
    }
    return total;
  }
  for (const auto& t : terms_) {
    i128 v = t.coeff;
    for (const auto& [j, e] : t.factors) {
      // Recompute the power with checks; the table may have saturated.
      const i128 x = offsets[j] - box_.bound(j);
      v = checked_mul(v, checked_pow(x, e));
    }
    total = checked_add(total, v);
  }
  return total;
}

void BoxEvaluator::for_each_in_slice(std::size_t slice, const std::function<void(i128)>& visit) const {
  const std::size_t n = box_.size();
  std::vector<i128> offsets(n, 0);
  offsets[0] = static_cast<i128>(slice);
  for (;;) {
    visit(value_at(offsets));
    std::size_t j = n;
    while (j > 1) {
      --j;
      if (++offsets[j] <= 2 * box_.bound(j)) break;
      offsets[j] = 0;
      if (j == 1) return;
    }
    if (n == 1) return;
  }
}

u128 ValueTable::multiplicity(i128 value) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), value,
                                   [](const auto& e, i128 v) { return e.first < v; });
  return (it != entries.end() && it->first == value) ? it->second : 0;
}

ValueTable build_value_table(const Polynomial& p, const Box& box, const EnumerationConfig& config) {
  check_box_guard(box, config);
  const BoxEvaluator eval(p, box);
  // A fixed chunking keeps the work split independent of the thread count.
  const std::size_t slices = eval.slice_count();
  const std::size_t chunks = std::min<std::size_t>(slices, 256);
  std::vector<std::vector<std::pair<i128, u128>>> partial(chunks);
  parallel_for(chunks, config.threads, [&](std::size_t c) {
    std::unordered_map<i128, u128, I128Hash> counts;
    for (std::size_t s = c * slices / chunks; s < (c + 1) * slices / chunks; ++s) {
      eval.for_each_in_slice(s, [&](i128 v) { ++counts[v]; });
    }
    partial[c].assign(counts.begin(), counts.end());
  });
  std::vector<std::pair<i128, u128>> all;
  for (auto& part : partial) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  ValueTable table;
  for (const auto& [v, c] : all) {
    if (!table.entries.empty() && table.entries.back().first == v) {
      table.entries.back().second += c;
    } else {
      table.entries.emplace_back(v, c);
    }
  }
  for (const auto& [v, c] : table.entries) table.total_points += c;
  return table;
}

}  // namespace sqfree
