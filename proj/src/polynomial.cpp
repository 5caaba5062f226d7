#include "polyhankel/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polyhankel {

namespace {

void check_same_dimension(const Polynomial& f, const Polynomial& g, const char* op) {
  if (f.dimension() != g.dimension())
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(f.dimension()) + " vs " +
                                std::to_string(g.dimension()) + ")");
}

}  // namespace

Polynomial::Polynomial(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial Polynomial::constant(int d, Coefficient c) {
  Polynomial f(d);
  f.add_term(1, c);
  return f;
}

Polynomial Polynomial::variable(int d, int var) {
  if (var < 1 || var > d)
    throw std::invalid_argument("Polynomial::variable: index out of range");
  Polynomial f(d);
  f.add_term(nth_prime(static_cast<std::size_t>(var)), 1.0);
  return f;
}

Polynomial Polynomial::monomial(int d, MonomialId n, Coefficient c) {
  Polynomial f(d);
  f.add_term(n, c);
  return f;
}

Coefficient Polynomial::coeff(MonomialId n) const {
  const auto it = terms_.find(n);
  return it == terms_.end() ? Coefficient{0.0} : it->second;
}

std::vector<MonomialId> Polynomial::support() const {
  std::vector<MonomialId> keys;
  keys.reserve(terms_.size());
  for (const auto& [n, c] : terms_) keys.push_back(n);
  return keys;
}

int Polynomial::max_exponent() const {
  int m = 0;
  for (const auto& [n, c] : terms_) {
    const MultiIndex e = factorize(n, d_);
    for (const int ei : e) m = std::max(m, ei);
  }
  return m;
}

Polynomial& Polynomial::add_term(MonomialId n, Coefficient c) {
  factorize(n, d_);  // id must be valid for this dimension
  const auto it = terms_.find(n);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(n, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

Coefficient Polynomial::evaluate(const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != d_)
    throw std::invalid_argument("Polynomial::evaluate: angle vector length mismatch");
  Coefficient value = 0.0;
  for (const auto& [n, c] : terms_) {
    const MultiIndex e = factorize(n, d_);
    double phase = 0.0;
    for (int j = 0; j < d_; ++j) phase += e[j] * theta[j];
    value += c * std::polar(1.0, phase);
  }
  return value;
}

Polynomial operator+(const Polynomial& f, const Polynomial& g) {
  check_same_dimension(f, g, "operator+");
  Polynomial out = f;
  for (const auto& [n, c] : g.terms_) {
    const auto it = out.terms_.find(n);
    if (it == out.terms_.end()) {
      if (c != 0.0) out.terms_.emplace(n, c);
    } else {
      it->second += c;
      if (it->second == 0.0) out.terms_.erase(it);
    }
  }
  return out;
}

Polynomial operator-(const Polynomial& f, const Polynomial& g) {
  return f + g * Coefficient{-1.0};
}

// Multiplicative convolution: the coefficient of n in fg is the sum of
// a_j b_k over all factorizations n = j*k.
Polynomial operator*(const Polynomial& f, const Polynomial& g) {
  check_same_dimension(f, g, "operator*");
  Polynomial out(f.d_);
  for (const auto& [j, a] : f.terms_) {
    for (const auto& [k, b] : g.terms_) {
      const MonomialId n = checked_mul(j, k);
      const Coefficient c = a * b;
      const auto it = out.terms_.find(n);
      if (it == out.terms_.end()) {
        if (c != 0.0) out.terms_.emplace(n, c);
      } else {
        it->second += c;
        if (it->second == 0.0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

Polynomial Polynomial::operator*(Coefficient c) const {
  Polynomial out(d_);
  if (c == 0.0) return out;
  for (const auto& [n, a] : terms_) {
    const Coefficient v = a * c;
    if (v != 0.0) out.terms_.emplace(n, v);
  }
  return out;
}

double h2_norm(const Polynomial& f) {
  double s = 0.0;
  for (const auto& [n, c] : f.terms()) s += std::norm(c);
  return std::sqrt(s);
}

TrigPolynomial::TrigPolynomial(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("TrigPolynomial: dimension must be >= 1");
}

TrigPolynomial TrigPolynomial::from(const Polynomial& f) {
  TrigPolynomial out(f.dimension());
  for (const auto& [n, c] : f.terms())
    out.add_term(factorize(n, f.dimension()), c);
  return out;
}

TrigPolynomial& TrigPolynomial::add_term(const MultiIndex& exponents, Coefficient c) {
  if (static_cast<int>(exponents.size()) != d_)
    throw std::invalid_argument("TrigPolynomial::add_term: exponent vector length mismatch");
  const auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(exponents, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

Coefficient TrigPolynomial::evaluate(const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != d_)
    throw std::invalid_argument("TrigPolynomial::evaluate: angle vector length mismatch");
  Coefficient value = 0.0;
  for (const auto& [e, c] : terms_) {
    double phase = 0.0;
    for (int j = 0; j < d_; ++j) phase += e[j] * theta[j];
    value += c * std::polar(1.0, phase);
  }
  return value;
}

Polynomial riesz_project(const TrigPolynomial& phi) {
  Polynomial out(phi.dimension());
  for (const auto& [e, c] : phi.terms()) {
    const bool analytic = std::all_of(e.begin(), e.end(), [](int x) { return x >= 0; });
    if (analytic) out.add_term(compose(e), c);
  }
  return out;
}

namespace {

using ExponentKey = std::vector<int>;

ExponentKey project_exponents(const MultiIndex& e, const std::vector<int>& vars) {
  ExponentKey key;
  key.reserve(vars.size());
  for (const int v : vars) key.push_back(e[v]);
  return key;
}

// Tries to split f across the variable partition (vars_a, vars_b).  Succeeds
// when the support is the Cartesian product of its two projections and the
// coefficient table is rank one across the split.
std::optional<std::pair<Polynomial, Polynomial>> try_split(
    const Polynomial& f, const std::vector<MultiIndex>& exps,
    const std::vector<Coefficient>& coeffs, const std::vector<int>& vars_a,
    const std::vector<int>& vars_b) {
  std::map<std::pair<ExponentKey, ExponentKey>, Coefficient> table;
  std::map<ExponentKey, MultiIndex> side_a, side_b;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    ExponentKey ka = project_exponents(exps[i], vars_a);
    ExponentKey kb = project_exponents(exps[i], vars_b);
    side_a.try_emplace(ka, exps[i]);
    side_b.try_emplace(kb, exps[i]);
    table.emplace(std::make_pair(std::move(ka), std::move(kb)), coeffs[i]);
  }
  if (side_a.size() * side_b.size() != exps.size()) return std::nullopt;

  double scale = 0.0;
  for (const Coefficient c : coeffs) scale = std::max(scale, std::abs(c));
  const ExponentKey& a0 = side_a.begin()->first;
  const ExponentKey& b0 = side_b.begin()->first;
  const auto c00_it = table.find({a0, b0});
  if (c00_it == table.end()) return std::nullopt;
  const Coefficient c00 = c00_it->second;

  for (const auto& [ka, ea] : side_a) {
    const auto ga_it = table.find({ka, b0});
    if (ga_it == table.end()) return std::nullopt;
    for (const auto& [kb, eb] : side_b) {
      const auto it = table.find({ka, kb});
      const auto hb_it = table.find({a0, kb});
      if (it == table.end() || hb_it == table.end()) return std::nullopt;
      const Coefficient predicted = ga_it->second * hb_it->second / c00;
      if (std::abs(it->second - predicted) > 1e-10 * scale) return std::nullopt;
    }
  }

  const int d = f.dimension();
  Polynomial g(d), h(d);
  for (const auto& [ka, ea] : side_a) {
    MultiIndex e(d, 0);
    for (std::size_t i = 0; i < vars_a.size(); ++i) e[vars_a[i]] = ka[i];
    g.add_term(compose(e), table.at({ka, b0}));
  }
  for (const auto& [kb, eb] : side_b) {
    MultiIndex e(d, 0);
    for (std::size_t i = 0; i < vars_b.size(); ++i) e[vars_b[i]] = kb[i];
    h.add_term(compose(e), table.at({a0, kb}) / c00);
  }
  return std::make_pair(std::move(g), std::move(h));
}

}  // namespace

std::vector<Polynomial> factor_disjoint_variables(const Polynomial& f) {
  if (f.is_zero() || f.term_count() == 1) return {f};
  const int d = f.dimension();

  std::vector<MultiIndex> exps;
  std::vector<Coefficient> coeffs;
  exps.reserve(f.term_count());
  for (const auto& [n, c] : f.terms()) {
    exps.push_back(factorize(n, d));
    coeffs.push_back(c);
  }

  std::vector<int> active;
  for (int v = 0; v < d; ++v)
    for (const MultiIndex& e : exps)
      if (e[v] > 0) {
        active.push_back(v);
        break;
      }
  if (active.size() < 2) return {f};
  if (active.size() > 24) return {f};  // subset search is exponential; give up

  // Search splits {v0} u A | rest over subsets A of the remaining active
  // variables, smallest A first so the leading factor is minimal.
  const std::size_t rest = active.size() - 1;
  std::vector<std::uint32_t> masks;
  masks.reserve(std::size_t{1} << rest);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << rest); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
    return std::popcount(x) < std::popcount(y);
  });
  for (const std::uint32_t mask : masks) {
    if (mask == (std::uint32_t{1} << rest) - 1) continue;  // no proper split
    std::vector<int> vars_a{active[0]}, vars_b;
    for (std::size_t i = 0; i < rest; ++i)
      ((mask >> i) & 1 ? vars_a : vars_b).push_back(active[i + 1]);
    auto split = try_split(f, exps, coeffs, vars_a, vars_b);
    if (!split) continue;
    std::vector<Polynomial> out = factor_disjoint_variables(split->first);
    std::vector<Polynomial> tail = factor_disjoint_variables(split->second);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  }
  return {f};
}

}  // namespace polyhankel
