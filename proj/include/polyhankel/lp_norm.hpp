#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyhankel/errors.hpp"
#include "polyhankel/polynomial.hpp"

namespace polyhankel {

inline constexpr std::uint64_t kDefaultQuadBudget = 100000000;  // total evaluations

struct LpEstimate {
  enum class Method { tensor_quadrature, monte_carlo, separable_exact };

  double value = 0.0;
  Method method = Method::tensor_quadrature;
  // Standard error for Monte Carlo; 0 for values exact by structure.
  double error_bound = 0.0;
};

std::string to_string(LpEstimate::Method method);

// (integral of |f|^p over T^d)^{1/p} by the tensor-product trapezoidal rule
// on nodes_per_dim equispaced angles per dimension.  Exact for trigonometric
// polynomials when p is an even integer and nodes_per_dim exceeds the
// bandwidth of |f|^p.  Throws BudgetExceeded when nodes_per_dim^d > budget.
LpEstimate lp_norm_quadrature(const Polynomial& f, double p, int nodes_per_dim,
                              std::uint64_t budget = kDefaultQuadBudget,
                              bool parallel = true);
LpEstimate lp_norm_quadrature(const TrigPolynomial& f, double p, int nodes_per_dim,
                              std::uint64_t budget = kDefaultQuadBudget,
                              bool parallel = true);

// L^p norm of a product of factors over pairwise disjoint variables, as the
// product of the factors' own norms.  Each factor must reduce to a function
// of a single angle: either it is genuinely univariate, or it has exactly two
// terms c1 z^a + c2 z^b (then |f| is distributed as |c1 + c2 e^{it}| with t
// uniform).  The one-dimensional integrals are done with Gauss-Legendre
// panels split at the zeros of the factor on the circle, so the values are
// exact to machine precision for moderate p.  Throws std::invalid_argument
// when factors share a variable or a factor has no univariate reduction.
LpEstimate lp_norm_separable(const std::vector<Polynomial>& factors, double p,
                             int nodes_per_arc = 64);

// Monte Carlo estimate over uniform angles with the counter-based generator;
// error_bound is the delta-method standard error of mean^{1/p}.
LpEstimate lp_norm_monte_carlo(const Polynomial& f, double p, std::uint64_t samples,
                               std::uint64_t seed, bool parallel = true);
LpEstimate lp_norm_monte_carlo(const TrigPolynomial& f, double p, std::uint64_t samples,
                               std::uint64_t seed, bool parallel = true);

}  // namespace polyhankel
