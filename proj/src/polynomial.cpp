#include "sqfree/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sqfree/error.hpp"

namespace sqfree {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw PreconditionError("polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t num_vars, TermMap terms) : Polynomial(num_vars) {
  for (auto& [e, c] : terms) {
    if (e.size() != num_vars) throw DimensionError("exponent vector length differs from num_vars");
    add_term(e, c);
  }
}

Polynomial Polynomial::constant(std::size_t num_vars, i128 value) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw DimensionError("variable index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  Polynomial p(num_vars);
  p.add_term(e, 1);
  return p;
}

void Polynomial::add_term(const Exponents& e, i128 c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second = checked_add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

i128 Polynomial::coefficient(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

i128 Polynomial::constant_term() const { return coefficient(Exponents(num_vars_, 0)); }

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    deg = std::max(deg, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
  }
  return deg;
}

bool Polynomial::is_homogeneous(unsigned degree) const {
  return std::all_of(terms_.begin(), terms_.end(), [degree](const auto& t) {
    return std::accumulate(t.first.begin(), t.first.end(), 0u) == degree;
  });
}

unsigned Polynomial::max_exponent(std::size_t var) const {
  unsigned m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, e[var]);
  return m;
}

std::vector<std::size_t> Polynomial::involved_variables() const {
  std::vector<std::size_t> vars;
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (max_exponent(j) > 0) vars.push_back(j);
  }
  return vars;
}

i128 Polynomial::evaluate(std::span<const i128> point) const {
  if (point.size() != num_vars_) throw DimensionError("point length differs from num_vars");
  i128 total = 0;
  for (const auto& [e, c] : terms_) {
    i128 term = c;
    for (std::size_t j = 0; j < num_vars_; ++j) {
      if (e[j] != 0) term = checked_mul(term, checked_pow(point[j], e[j]));
    }
    total = checked_add(total, term);
  }
  return total;
}

std::uint64_t Polynomial::evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t modulus) const {
  if (point.size() != num_vars_) throw DimensionError("point length differs from num_vars");
  const u128 m = modulus;
  u128 total = 0;
  for (const auto& [e, c] : terms_) {
    u128 term = static_cast<u128>(mod_floor(c, static_cast<i128>(m)));
    for (std::size_t j = 0; j < num_vars_; ++j) {
      const u128 base = point[j] % m;
      for (unsigned k = 0; k < e[j]; ++k) term = term * base % m;
    }
    total = (total + term) % m;
  }
  return static_cast<std::uint64_t>(total);
}

Polynomial Polynomial::partial_derivative(std::size_t var) const {
  if (var >= num_vars_) throw DimensionError("variable index out of range");
  Polynomial d(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    --f[var];
    d.add_term(f, checked_mul(c, e[var]));
  }
  return d;
}

Polynomial Polynomial::with_num_vars(std::size_t num_vars) const {
  if (num_vars < num_vars_) {
    for (std::size_t j = num_vars; j < num_vars_; ++j) {
      if (max_exponent(j) > 0) throw DimensionError("cannot drop a variable that occurs");
    }
  }
  Polynomial q(num_vars);
  for (const auto& [e, c] : terms_) {
    Exponents f(num_vars, 0);
    std::copy_n(e.begin(), std::min(num_vars, num_vars_), f.begin());
    q.add_term(f, c);
  }
  return q;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw DimensionError("polynomials have different num_vars");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw DimensionError("polynomials have different num_vars");
  for (const auto& [e, c] : other.terms_) add_term(e, checked_sub(0, c));
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw DimensionError("polynomials have different num_vars");
  Polynomial r(a.num_vars_);
  Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      r.add_term(e, checked_mul(ca, cb));
    }
  }
  return r;
}

Polynomial operator*(i128 scalar, const Polynomial& p) {
  Polynomial r(p.num_vars_);
  for (const auto& [e, c] : p.terms_) r.add_term(e, checked_mul(scalar, c));
  return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(num_vars_, 1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial::TermMap parse(std::size_t& max_index) {
    std::vector<std::pair<std::map<std::size_t, unsigned>, i128>> raw;
    skip_space();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    for (;;) {
      raw.push_back(term(negative));
      skip_space();
      if (pos_ == text_.size()) break;
      const char c = peek();
      if (c != '+' && c != '-') throw ParseError(std::string("expected '+' or '-', found '") + c + "'", pos_);
      negative = c == '-';
      ++pos_;
    }
    max_index = 0;
    for (const auto& [vars, c] : raw) {
      if (!vars.empty()) max_index = std::max(max_index, vars.rbegin()->first);
    }
    terms_.clear();
    for (auto& [vars, c] : raw) {
      Exponents e(std::max<std::size_t>(max_index, 1), 0);
      for (const auto& [index, exp] : vars) e[index - 1] += exp;
      terms_.emplace_back(std::move(e), c);
    }
    Polynomial::TermMap out;
    for (auto& [e, c] : terms_) {
      auto [it, inserted] = out.try_emplace(e, c);
      if (!inserted) it->second = checked_add(it->second, c);
    }
    return out;
  }

 private:
  std::pair<std::map<std::size_t, unsigned>, i128> term(bool negative) {
    skip_space();
    i128 coeff = 1;
    std::map<std::size_t, unsigned> vars;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = integer();
      skip_space();
      if (peek() != '*') return {vars, negative ? checked_sub(0, coeff) : coeff};
      ++pos_;
      skip_space();
    }
    for (;;) {
      factor(vars);
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      skip_space();
    }
    return {vars, negative ? checked_sub(0, coeff) : coeff};
  }

  void factor(std::map<std::size_t, unsigned>& vars) {
    if (peek() != 'x') throw ParseError("expected variable 'x<index>'", pos_);
    ++pos_;
    const std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected variable index", pos_);
    const i128 index = integer();
    if (index == 0) throw ParseError("variable index 0 is not allowed", at);
    if (index > 4096) throw ParseError("variable index too large", at);
    unsigned exp = 1;
    skip_space();
    if (peek() == '^') {
      ++pos_;
      skip_space();
      const std::size_t exp_at = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected exponent", pos_);
      const i128 e = integer();
      if (e > 1024) throw ParseError("exponent too large", exp_at);
      exp = static_cast<unsigned>(e);
    }
    vars[static_cast<std::size_t>(index)] += exp;
  }

  i128 integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    try {
      return parse_i128(text_.substr(start, pos_ - start));
    } catch (const ParseError&) {
      throw ParseError("integer out of 128-bit range", start);
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::pair<Exponents, i128>> terms_;
};

// Graded lexicographic: higher total degree first, then larger exponent of x1, x2, ...
bool grlex_before(const Exponents& a, const Exponents& b) {
  const auto da = std::accumulate(a.begin(), a.end(), 0u);
  const auto db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da > db;
  return a > b;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::optional<std::size_t> arity) {
  std::size_t max_index = 0;
  Parser parser(text);
  auto raw = parser.parse(max_index);
  std::size_t num_vars = std::max<std::size_t>(max_index, 1);
  if (arity) {
    if (*arity == 0) throw ParseError("arity must be positive", 0);
    if (*arity < max_index) {
      throw ParseError("arity " + std::to_string(*arity) + " is smaller than the largest variable index " +
                           std::to_string(max_index),
                       0);
    }
    num_vars = *arity;
  }
  Polynomial::TermMap terms;
  for (auto& [e, c] : raw) {
    Exponents f(num_vars, 0);
    std::copy(e.begin(), e.end(), f.begin());
    terms.emplace(std::move(f), c);
  }
  return Polynomial(num_vars, std::move(terms));
}

std::string render(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Exponents, i128>> terms(p.terms().begin(), p.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return grlex_before(a.first, b.first); });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const u128 mag = uabs(c);
    std::string mono;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(j + 1);
      if (e[j] > 1) mono += "^" + std::to_string(e[j]);
    }
    if (mono.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boxes

Box::Box(std::vector<i128> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw DimensionError("box needs at least one bound");
  for (const i128 b : bounds_) {
    if (b < 1) throw PreconditionError("box bounds must be >= 1");
  }
}

Box Box::cube(std::size_t num_vars, i128 P) { return Box(std::vector<i128>(num_vars, P)); }

u128 Box::cardinality() const {
  i128 total = 1;
  for (const i128 b : bounds_) total = checked_mul(total, checked_add(checked_mul(2, b), 1));
  return static_cast<u128>(total);
}

// ---------------------------------------------------------------------------
// Unimodular maps

i128 determinant(const UnimodularMap::Matrix& input) {
  const std::size_t n = input.size();
  for (const auto& row : input) {
    if (row.size() != n) throw DimensionError("matrix is not square");
  }
  if (n == 0) return 1;
  auto m = input;
  i128 sign = 1;
  i128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = checked_sub(checked_mul(m[i][j], m[k][k]), checked_mul(m[i][k], m[k][j])) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

UnimodularMap::UnimodularMap(Matrix matrix) : matrix_(std::move(matrix)), determinant_(0) {
  if (matrix_.empty()) throw DimensionError("unimodular map needs dimension >= 1");
  determinant_ = sqfree::determinant(matrix_);
  if (determinant_ != 1 && determinant_ != -1) {
    throw PreconditionError("matrix is not unimodular (determinant " + to_string(determinant_) + ")");
  }
}

UnimodularMap UnimodularMap::identity(std::size_t n) {
  Matrix m(n, std::vector<i128>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return UnimodularMap(std::move(m));
}

UnimodularMap UnimodularMap::shear(std::size_t n, std::size_t target, std::size_t source, i128 factor) {
  if (target >= n || source >= n || target == source) throw DimensionError("invalid shear indices");
  Matrix m(n, std::vector<i128>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  m[target][source] = factor;
  return UnimodularMap(std::move(m));
}

UnimodularMap UnimodularMap::swap(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= n || j >= n) throw DimensionError("invalid swap indices");
  Matrix m(n, std::vector<i128>(n, 0));
  for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
  if (i != j) {
    m[i][i] = m[j][j] = 0;
    m[i][j] = m[j][i] = 1;
  }
  return UnimodularMap(std::move(m));
}

std::vector<i128> UnimodularMap::apply(std::span<const i128> x) const {
  if (x.size() != dimension()) throw DimensionError("point length differs from map dimension");
  std::vector<i128> y(dimension(), 0);
  for (std::size_t i = 0; i < dimension(); ++i) {
    for (std::size_t j = 0; j < dimension(); ++j) {
      if (matrix_[i][j] != 0) y[i] = checked_add(y[i], checked_mul(matrix_[i][j], x[j]));
    }
  }
  return y;
}

UnimodularMap operator*(const UnimodularMap& a, const UnimodularMap& b) {
  const std::size_t n = a.dimension();
  if (b.dimension() != n) throw DimensionError("maps have different dimensions");
  UnimodularMap::Matrix m(n, std::vector<i128>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a.matrix_[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] = checked_add(m[i][j], checked_mul(a.matrix_[i][k], b.matrix_[k][j]));
      }
    }
  }
  return UnimodularMap(std::move(m));
}

Polynomial substitute_unimodular(const Polynomial& p, const UnimodularMap& u) {
  const std::size_t n = p.num_vars();
  if (u.dimension() != n) throw DimensionError("map dimension differs from num_vars");
  // Row i of u is the linear form replacing x_i.
  std::vector<std::vector<Polynomial>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (u.matrix()[i][j] != 0) row += u.matrix()[i][j] * Polynomial::variable(n, j);
    }
    powers[i].push_back(Polynomial::constant(n, 1));
    const unsigned top = p.max_exponent(i);
    for (unsigned k = 1; k <= top; ++k) powers[i].push_back(powers[i].back() * row);
  }
  Polynomial q(n);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(n, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] != 0) term = term * powers[i][e[i]];
    }
    q += term;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Cubic forms

namespace {

Exponents monomial(std::size_t n, std::initializer_list<std::size_t> vars) {
  Exponents e(n, 0);
  for (const auto v : vars) ++e[v];
  return e;
}

// Candidate shear factors in search order: 1, -1, 2, -2, ...
i128 nth_candidate(unsigned k) {
  const auto mag = static_cast<i128>(k / 2 + 1);
  return (k % 2 == 0) ? mag : -mag;
}

// Makes the coefficient of x_pivot^3 nonzero by shears with source x_pivot.
// Shears with source x_pivot leave every other x_t^3 coefficient unchanged.
std::optional<UnimodularMap> expose_cube(const Polynomial& form, std::size_t pivot) {
  const std::size_t n = form.num_vars();
  if (form.coefficient(monomial(n, {pivot, pivot, pivot})) != 0) return std::nullopt;

  // Single shear x_j := x_j + lambda x_pivot. New pivot cube coefficient is
  // c_{ppj} lambda + c_{pjj} lambda^2 + c_{jjj} lambda^3 in monomial coefficients.
  for (std::size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    const i128 ppj = form.coefficient(monomial(n, {pivot, pivot, j}));
    const i128 pjj = form.coefficient(monomial(n, {pivot, j, j}));
    const i128 jjj = form.coefficient(monomial(n, {j, j, j}));
    if (ppj == 0 && pjj == 0 && jjj == 0) continue;
    // A nonzero cubic with no constant term has at most two nonzero roots.
    for (unsigned k = 0;; ++k) {
      const i128 lambda = nth_candidate(k);
      const i128 value = ppj * lambda + pjj * lambda * lambda + jjj * lambda * lambda * lambda;
      if (value != 0) return UnimodularMap::shear(n, j, pivot, lambda);
    }
  }

  // Otherwise x_pivot occurs only through some x_pivot x_j x_k with j < k.
  for (std::size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (k == pivot) continue;
      const i128 pjk = form.coefficient(monomial(n, {pivot, j, k}));
      if (pjk == 0) continue;
      const i128 jjk = form.coefficient(monomial(n, {j, j, k}));
      const i128 jkk = form.coefficient(monomial(n, {j, k, k}));
      auto coeff = [&](i128 lambda, i128 mu) {
        return pjk * lambda * mu + jjk * lambda * lambda * mu + jkk * lambda * mu * mu;
      };
      i128 lambda = 1, mu = 1;
      if (jkk != 0) {
        while (coeff(lambda, mu) == 0) ++mu;
      } else if (jjk != 0) {
        while (coeff(lambda, mu) == 0) ++lambda;
      }
      return UnimodularMap::shear(n, j, pivot, lambda) * UnimodularMap::shear(n, k, pivot, mu);
    }
  }
  throw PreconditionError("variable x" + std::to_string(pivot + 1) + " does not occur in the form");
}

}  // namespace

CubeExposure make_cubes_explicit(const Polynomial& p) {
  if (!p.is_cubic_form()) throw PreconditionError("make_cubes_explicit needs a nonzero cubic form");
  const std::size_t n = p.num_vars();
  const auto involved = p.involved_variables();
  if (n < 2 || involved.size() < 2) throw PreconditionError("make_cubes_explicit needs a form in at least two variables");

  // Bring two occurring variables to positions 1 and 2, preferring ones that
  // already carry a cube.
  std::vector<std::size_t> order;
  for (const auto v : involved) {
    if (p.coefficient(monomial(n, {v, v, v})) != 0) order.push_back(v);
  }
  for (const auto v : involved) {
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  }
  std::vector<std::size_t> position(n);
  std::iota(position.begin(), position.end(), 0);
  UnimodularMap u = UnimodularMap::identity(n);
  for (std::size_t slot = 0; slot < 2; ++slot) {
    // Where does original variable order[slot] currently live?
    const auto at = static_cast<std::size_t>(std::find(position.begin(), position.end(), order[slot]) - position.begin());
    if (at != slot) {
      u = u * UnimodularMap::swap(n, slot, at);
      std::swap(position[slot], position[at]);
    }
  }
  Polynomial q = substitute_unimodular(p, u);

  for (std::size_t pivot = 0; pivot < 2; ++pivot) {
    if (auto step = expose_cube(q, pivot)) {
      q = substitute_unimodular(q, *step);
      u = u * *step;
    }
  }
  return {std::move(q), std::move(u)};
}

std::optional<ScaledLinearCube> is_scaled_linear_cube(const Polynomial& p) {
  if (!p.is_cubic_form()) throw PreconditionError("is_scaled_linear_cube needs a nonzero cubic form");
  const std::size_t n = p.num_vars();
  const auto involved = p.involved_variables();
  for (const auto v : involved) {
    if (p.coefficient(monomial(n, {v, v, v})) == 0) return std::nullopt;
  }
  const std::size_t first = involved.front();
  const Rational a = p.coefficient(monomial(n, {first, first, first}));
  std::vector<Rational> b(n, Rational(0));
  b[first] = 1;
  for (const auto j : involved) {
    if (j == first) continue;
    b[j] = Rational(p.coefficient(monomial(n, {first, first, j}))) / (Rational(3) * a);
    if (b[j].is_zero()) return std::nullopt;
  }

  // Normalize b to a primitive integer vector with positive leading entry.
  i128 lcm = 1;
  for (const auto& r : b) {
    const auto g = static_cast<i128>(gcd(uabs(lcm), uabs(r.den())));
    lcm = checked_mul(lcm / g, r.den());
  }
  u128 content = 0;
  for (auto& r : b) {
    r = r * Rational(lcm);
    content = gcd(content, uabs(r.num()));
  }
  Rational scale = a;
  const Rational t = Rational(lcm, static_cast<i128>(content));  // b_new = t * b_old
  for (auto& r : b) r = r / Rational(static_cast<i128>(content));
  scale = a / (t * t * t);

  // Expand scale * (b . x)^3 and compare exactly.
  for (std::size_t i = 0; i < involved.size(); ++i) {
    for (std::size_t j = i; j < involved.size(); ++j) {
      for (std::size_t k = j; k < involved.size(); ++k) {
        const std::size_t vi = involved[i], vj = involved[j], vk = involved[k];
        i128 multinomial = 6;
        if (vi == vj && vj == vk) {
          multinomial = 1;
        } else if (vi == vj || vj == vk) {
          multinomial = 3;
        }
        const Rational expected = scale * Rational(multinomial) * b[vi] * b[vj] * b[vk];
        if (!(expected == Rational(p.coefficient(monomial(n, {vi, vj, vk}))))) return std::nullopt;
      }
    }
  }
  return ScaledLinearCube{scale, std::move(b)};
}

}  // namespace sqfree
