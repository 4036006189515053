#include "sqfree/collision_stats.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sqfree/error.hpp"
#include "sqfree/local_density.hpp"
#include "sqfree/squarefree_count.hpp"

namespace sqfree {

u128 ValueHistogram::sum_of_squares() const {
  u128 total = 0;
  for (const auto& [v, r] : table.entries) {
    if (r > (~static_cast<u128>(0) - total) / r) throw OverflowError("sum of R(n)^2 exceeds 128 bits");
    total += r * r;
  }
  return total;
}

bool ValueHistogram::is_symmetric() const {
  const auto& e = table.entries;
  for (std::size_t i = 0, j = e.size(); i < e.size(); ++i) {
    --j;
    if (e[i].first != -e[j].first || e[i].second != e[j].second) return false;
  }
  return true;
}

ValueHistogram value_histogram(const Polynomial& p, const Box& box, const EnumerationConfig& config) {
  return {box, build_value_table(p, box, config)};
}

namespace {

u128 checked_sum_of_squares(const ValueHistogram& h, bool odd) {
  if (odd && !h.is_symmetric()) throw std::logic_error("histogram of an odd polynomial is not symmetric");
  const u128 m = h.sum_of_squares();
  if (m < h.total_points()) throw std::logic_error("collision count below the diagonal");
  return m;
}

}  // namespace

CollisionCount collision_count_M(const Polynomial& p, i128 P, bool allow_degenerate, const EnumerationConfig& config) {
  if (P < 1) throw PreconditionError("P must be positive");
  if (!p.is_cubic_form()) throw PreconditionError("collision counts need a nonzero cubic form");
  if (!allow_degenerate && is_scaled_linear_cube(p)) {
    throw PreconditionError("form is a multiple of the cube of a linear form");
  }
  const Box box = Box::cube(p.num_vars(), P);
  return {P, box, checked_sum_of_squares(value_histogram(p, box, config), true)};
}

CollisionCount collision_count_L(i128 c, unsigned k, const Polynomial& cstar, i128 P, const EnumerationConfig& config) {
  const Polynomial poly = mixed_power_polynomial(c, k, cstar);
  std::vector<i128> bounds(poly.num_vars(), P);
  bounds[0] = mixed_box_height(P, k);
  const Box box(bounds);
  return {P, box, checked_sum_of_squares(value_histogram(poly, box, config), k == 3)};
}

namespace {

double slope_of(const std::vector<std::pair<i128, u128>>& samples, std::size_t n) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(samples[i].first));
    const double y = std::log(static_cast<double>(samples[i].second));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

void validate_samples(const std::vector<std::pair<i128, u128>>& samples, std::size_t minimum) {
  if (samples.size() < minimum) throw PreconditionError("exponent fit needs at least 3 samples");
  std::set<i128> seen;
  for (const auto& [P, count] : samples) {
    if (P < 1) throw PreconditionError("sample P must be positive");
    if (count < 1) throw PreconditionError("sample counts must be at least 1");
    if (!seen.insert(P).second) throw PreconditionError("sample P values must be distinct");
  }
}

}  // namespace

ExponentFit exponent_fit(const std::vector<std::pair<i128, u128>>& samples, double reference) {
  validate_samples(samples, 3);
  return {samples, slope_of(samples, samples.size()), reference};
}

std::string to_json(const ExponentFit& fit) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [P, count] : fit.samples) rows.push_back({{"P", to_string(P)}, {"count", to_string(count)}});
  j["samples"] = std::move(rows);
  j["slope"] = decimal(fit.slope);
  j["reference"] = decimal(fit.reference);
  j["excess"] = decimal(fit.excess());
  return j.dump(2);
}

std::string exponent_csv(const std::vector<std::pair<i128, u128>>& samples) {
  validate_samples(samples, 0);
  std::string out = "P,count,log_slope_so_far\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += to_string(samples[i].first) + "," + to_string(samples[i].second) + ",";
    if (i > 0) out += decimal(slope_of(samples, i + 1));
    out += "\n";
  }
  return out;
}

}  // namespace sqfree
