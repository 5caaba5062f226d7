#pragma once

#include <utility>
#include <vector>

#include "polyhankel/hankel.hpp"
#include "polyhankel/polynomial.hpp"

namespace polyhankel {

// Finite truncation of H^2 x H^2: candidate factor supports for the rows (g)
// and columns (h) of the factorization table.
struct FactorizationGrid {
  std::vector<MonomialId> rows;
  std::vector<MonomialId> cols;
};

// Square grid over the union of divisors of f's support monomials.
FactorizationGrid default_grid(const Polynomial& f);

// f = sum_j g_j h_j, stored as polynomial pairs.
struct ExplicitFactorization {
  int d = 0;
  std::vector<std::pair<Polynomial, Polynomial>> pairs;
};

// sum_j ||g_j||_2 ||h_j||_2, the cost the weak norm takes an infimum over.
double wf_cost(const ExplicitFactorization& factorization);

// sum_j g_j h_j, for reconstruction checks.
Polynomial reconstruct(const ExplicitFactorization& factorization);

struct WeakNormResult {
  double upper = 0.0;  // nuclear norm of the feasible primal point
  double lower = 0.0;  // dual certificate value (valid grid-free lower bound)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

struct WfSolveOutput {
  WeakNormResult result;
  ExplicitFactorization factorization;
};

// Grid-relative weak factorization norm: minimize the nuclear norm of the
// table T over the grid subject to sum_{j*k=n} T_{jk} = a_n for every grid
// product n (a_n = 0 off the support of f).  Solved by ADMM with
// singular-value soft-thresholding; the constraint projection is a closed
// form per product fiber since the fibers partition the grid.  On success the
// factorization extracted from the SVD of the feasible point reproduces f
// coefficient-wise and its cost equals the reported upper value.
//
// The value is the infimum over factorizations supported on THIS grid; it
// upper-bounds nothing about other grids, so the result is always paired with
// the dual lower bound, which is valid globally.
//
// Throws std::invalid_argument when f's support is not covered by the grid
// products, and ConvergenceError when the iteration cap is reached.
WfSolveOutput wf_norm_primal(const Polynomial& f, const FactorizationGrid& grid,
                             double tol, int max_iterations = 50000);

// Lower bound through a Hankel form: |H_psi(f)| <= ||H_psi|| ||f||_{1,w}, so
// |apply_functional(psi, f)| / operator_norm(psi on grid) bounds the weak
// norm from below.  Throws std::invalid_argument on a zero-norm symbol.
double wf_norm_dual(const Polynomial& f, const HankelSymbol& symbol,
                    const FactorizationGrid& grid);

}  // namespace polyhankel
