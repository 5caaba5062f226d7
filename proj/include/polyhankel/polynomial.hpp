#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "polyhankel/monomial.hpp"

namespace polyhankel {

using Coefficient = std::complex<double>;

// Analytic polynomial on D^d with finitely many terms, stored against
// multiplicative monomial ids.  Canonical form: no zero coefficients are
// kept, and every id is valid for the ambient dimension.  Instances are
// value types; all operations return new polynomials.
class Polynomial {
 public:
  explicit Polynomial(int d);

  static Polynomial constant(int d, Coefficient c);
  static Polynomial variable(int d, int var);  // z_var, 1-based
  static Polynomial monomial(int d, MonomialId n, Coefficient c = 1.0);

  int dimension() const { return d_; }
  const std::map<MonomialId, Coefficient>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Coefficient coeff(MonomialId n) const;
  std::vector<MonomialId> support() const;

  // Largest single-variable exponent over the support (0 for constants).
  int max_exponent() const;

  // Adds c to the coefficient at n, keeping canonical form.  Validates the
  // id against the ambient dimension.
  Polynomial& add_term(MonomialId n, Coefficient c);

  // Value at z_j = exp(i theta_j).  theta must have length d.
  Coefficient evaluate(const std::vector<double>& theta) const;

  friend Polynomial operator+(const Polynomial& f, const Polynomial& g);
  friend Polynomial operator-(const Polynomial& f, const Polynomial& g);
  friend Polynomial operator*(const Polynomial& f, const Polynomial& g);
  Polynomial operator*(Coefficient c) const;
  bool operator==(const Polynomial&) const = default;

 private:
  int d_;
  std::map<MonomialId, Coefficient> terms_;
};

// sqrt(sum of squared coefficient moduli): the H^2 norm.
double h2_norm(const Polynomial& f);

// Trigonometric polynomial on T^d: finitely many terms with signed exponent
// vectors.  Used for symbols prior to Riesz projection.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(int d);

  static TrigPolynomial from(const Polynomial& f);

  int dimension() const { return d_; }
  const std::map<MultiIndex, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  TrigPolynomial& add_term(const MultiIndex& exponents, Coefficient c);

  Coefficient evaluate(const std::vector<double>& theta) const;

 private:
  int d_;
  std::map<MultiIndex, Coefficient> terms_;
};

// Riesz projection: keeps exactly the terms whose exponent vectors are
// componentwise nonnegative.  Idempotent, and the identity on analytic input.
Polynomial riesz_project(const TrigPolynomial& phi);
inline Polynomial riesz_project(const Polynomial& f) { return f; }

// Splits f into factors over pairwise disjoint variable sets wherever it has
// such a product structure (support is a Cartesian product and coefficients
// are rank-one across the split).  Returns {f} when no split exists.  Used to
// route expanded product polynomials through the separable norm path.
std::vector<Polynomial> factor_disjoint_variables(const Polynomial& f);

}  // namespace polyhankel
