#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyhankel/errors.hpp"
#include "polyhankel/kernels.hpp"
#include "polyhankel/polynomial.hpp"

namespace polyhankel {

// An analytic symbol psi induces the multiplicative Hankel form
//   H_psi(f, g) = sum_{j,k} rho_{j*k} a_j b_k,
// where rho are the coefficients of psi.  On a finite ordered index set J
// this is the |J| x |J| matrix M_{jk} = rho(j*k): entries depend on the index
// product only, which makes M symmetric.
using HankelSymbol = Polynomial;

// Dense below the cutoff, compressed sparse rows above it.
class HankelMatrix {
 public:
  static constexpr int kDenseCutoff = 512;

  HankelMatrix(const HankelSymbol& symbol, std::vector<MonomialId> index_set,
               int dense_cutoff = kDenseCutoff);

  int size() const { return static_cast<int>(index_.size()); }
  const std::vector<MonomialId>& index_set() const { return index_; }
  bool is_dense() const { return dense_.has_value(); }
  const Eigen::MatrixXcd& dense() const;

  Coefficient entry(int row, int col) const;
  std::uint64_t nonzeros() const;
  bool is_real() const;
  bool is_nonnegative() const;  // real with entrywise nonnegative values

  // y = M x (row-parallel, deterministic for any thread count).  The adjoint
  // uses the symmetry M^T = M, so M^H x = conj(M conj(x)).
  void apply(const std::vector<Coefficient>& x, std::vector<Coefficient>& y,
             bool parallel = true) const;
  void apply_adjoint(const std::vector<Coefficient>& x, std::vector<Coefficient>& y,
                     bool parallel = true) const;

 private:
  std::vector<MonomialId> index_;
  std::optional<Eigen::MatrixXcd> dense_;
  std::optional<kernels::CsrMatrix> sparse_;
};

inline HankelMatrix build_matrix(const HankelSymbol& symbol,
                                 std::vector<MonomialId> index_set,
                                 int dense_cutoff = HankelMatrix::kDenseCutoff) {
  return HankelMatrix(symbol, std::move(index_set), dense_cutoff);
}

// H_psi applied to f as a linear functional: sum_n a_n conj(rho_n).
Coefficient apply_functional(const HankelSymbol& symbol, const Polynomial& f);

// Same sum in 64-bit integer arithmetic.  Requires every coefficient of both
// polynomials to be a real integer; throws std::invalid_argument otherwise.
long long apply_functional_integer(const HankelSymbol& symbol, const Polynomial& f);

// Bilinear form H_psi(f, g) = <fg, psi>, evaluated through the product
// polynomial so it agrees with apply_functional(symbol, f*g) exactly.
Coefficient bilinear(const HankelSymbol& symbol, const Polynomial& f,
                     const Polynomial& g);

// Positive Schur-test weights.  `values` always holds the float weights; for
// the 2^{-Omega(j)/2} family `half_log2` additionally records the exact
// exponent (c_j = 2^{half_log2/2}).
struct SchurWeights {
  std::map<MonomialId, double> values;
  std::optional<std::map<MonomialId, int>> half_log2;
};

// c_j = 2^{-Omega(j)/2} for each j in J.  J must be contained in the divisor
// closure of pair_product_set(d).
SchurWeights helson_weights(int d, const std::vector<MonomialId>& J);

// Schur test: lambda = max_j (sum_k M_{jk} c_k) / c_j bounds the operator
// norm of an entrywise-nonnegative symmetric matrix.  Throws on negative or
// complex entries and on missing/nonpositive weights.
double schur_bound(const HankelMatrix& matrix, const SchurWeights& weights);

// Exact-arithmetic Schur bound for the pair construction: every row sum obeys
// sum_k rho_{jk} c_k = count_j * 2^{-(d/2-Omega(j))/2} with count_j a power of
// two, so the bound is an exact power of sqrt(2).
struct ExactDyadic {
  int half_log2 = 0;   // bound = 2^{half_log2/2}
  double value = 0.0;  // float rendering
};

ExactDyadic schur_bound_exact(int d);

// Integer verification of the row-sum identity: for every j in the divisor
// closure, the number of k with j*k in I equals 2^{d/2 - Omega(j)}, and every
// such k has Omega(k) = d/2 - Omega(j).  No floating point involved.
struct RowIdentityRow {
  MonomialId j = 0;
  int omega = 0;
  std::uint64_t count = 0;
  std::uint64_t expected = 0;
  bool complement_uniform = true;
};

struct RowIdentityReport {
  int d = 0;
  bool ok = false;
  std::vector<RowIdentityRow> rows;
};

RowIdentityReport row_sum_identity_check(int d);

struct NormResult {
  enum class Method { exact_svd, power_iteration, tensor_closed_form };

  double value = 0.0;
  Method method = Method::exact_svd;
  int iterations = 0;
  double residual = 0.0;
};

std::string to_string(NormResult::Method method);

// Largest singular value.  Dense matrices go through an exact SVD; sparse
// ones through power iteration on the Gram operator with the all-ones start
// vector (strictly positive, so it cannot be orthogonal to the Perron vector
// of an entrywise-nonnegative Gram matrix).  Power iteration stops when the
// Rayleigh quotient changes by less than tol relative to its own scale;
// hitting the iteration cap throws ConvergenceError with the best estimate.
NormResult operator_norm(const HankelMatrix& matrix, double tol = 1e-12,
                         int max_iterations = 100000);

// Power-iteration route regardless of storage; exposed for cross-checks.
NormResult power_iteration_norm(const HankelMatrix& matrix, double tol = 1e-12,
                                int max_iterations = 100000);

// The construction matrix is the (d/2)-fold tensor power of the 3x3 single
// pair block [[0,1,1],[1,0,0],[1,0,0]], and singular values multiply under
// tensor products, so its norm is sigma_max(block)^{d/2} = 2^{d/4}.
double tensor_norm_closed_form(int d);

}  // namespace polyhankel
