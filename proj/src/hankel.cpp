#include "polyhankel/hankel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyhankel {

namespace {

bool integral_real(Coefficient c, long long& out) {
  if (c.imag() != 0.0) return false;
  const double r = c.real();
  if (std::abs(r) > 4.611686018427387904e18) return false;  // 2^62
  const double rounded = std::nearbyint(r);
  if (rounded != r) return false;
  out = static_cast<long long>(rounded);
  return true;
}

}  // namespace

HankelMatrix::HankelMatrix(const HankelSymbol& symbol, std::vector<MonomialId> index_set,
                           int dense_cutoff)
    : index_(std::move(index_set)) {
  if (index_.empty())
    throw std::invalid_argument("HankelMatrix: index set must be nonempty");
  const int n = size();
  if (n <= dense_cutoff) {
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = symbol.coeff(checked_mul(index_[static_cast<std::size_t>(r)],
                                           index_[static_cast<std::size_t>(c)]));
    dense_ = std::move(m);
  } else {
    kernels::CsrMatrix m;
    m.rows = m.cols = n;
    m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const Coefficient v = symbol.coeff(checked_mul(index_[static_cast<std::size_t>(r)],
                                                       index_[static_cast<std::size_t>(c)]));
        if (v != 0.0) {
          m.col.push_back(c);
          m.val.push_back(v);
        }
      }
      m.row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.col.size());
    }
    sparse_ = std::move(m);
  }
}

const Eigen::MatrixXcd& HankelMatrix::dense() const {
  if (!dense_) throw std::logic_error("HankelMatrix: stored in sparse format");
  return *dense_;
}

Coefficient HankelMatrix::entry(int row, int col) const {
  if (dense_) return (*dense_)(row, col);
  const auto& m = *sparse_;
  for (int k = m.row_ptr[static_cast<std::size_t>(row)];
       k < m.row_ptr[static_cast<std::size_t>(row) + 1]; ++k)
    if (m.col[static_cast<std::size_t>(k)] == col) return m.val[static_cast<std::size_t>(k)];
  return 0.0;
}

std::uint64_t HankelMatrix::nonzeros() const {
  if (sparse_) return sparse_->val.size();
  std::uint64_t nnz = 0;
  for (int r = 0; r < size(); ++r)
    for (int c = 0; c < size(); ++c)
      if ((*dense_)(r, c) != 0.0) ++nnz;
  return nnz;
}

bool HankelMatrix::is_real() const {
  if (dense_) return dense_->imag().isZero(0.0);
  for (const Coefficient v : sparse_->val)
    if (v.imag() != 0.0) return false;
  return true;
}

bool HankelMatrix::is_nonnegative() const {
  if (dense_) {
    for (int r = 0; r < size(); ++r)
      for (int c = 0; c < size(); ++c) {
        const Coefficient v = (*dense_)(r, c);
        if (v.imag() != 0.0 || v.real() < 0.0) return false;
      }
    return true;
  }
  for (const Coefficient v : sparse_->val)
    if (v.imag() != 0.0 || v.real() < 0.0) return false;
  return true;
}

void HankelMatrix::apply(const std::vector<Coefficient>& x, std::vector<Coefficient>& y,
                         bool parallel) const {
  if (dense_) {
    // row-major copy is wasteful; multiply straight from the column-major
    // storage, one output row per task
    const int n = size();
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("HankelMatrix::apply: size mismatch");
    y.assign(static_cast<std::size_t>(n), Coefficient{0.0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int r = 0; r < n; ++r) {
      Coefficient s = 0.0;
      for (int c = 0; c < n; ++c) s += (*dense_)(r, c) * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] = s;
    }
    return;
  }
  kernels::matvec(*sparse_, x, y, parallel);
}

void HankelMatrix::apply_adjoint(const std::vector<Coefficient>& x,
                                 std::vector<Coefficient>& y, bool parallel) const {
  std::vector<Coefficient> xc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xc[i] = std::conj(x[i]);
  apply(xc, y, parallel);
  for (Coefficient& v : y) v = std::conj(v);
}

Coefficient apply_functional(const HankelSymbol& symbol, const Polynomial& f) {
  if (symbol.dimension() != f.dimension())
    throw std::invalid_argument("apply_functional: dimension mismatch");
  Coefficient s = 0.0;
  const bool f_smaller = f.term_count() <= symbol.term_count();
  const auto& outer = f_smaller ? f.terms() : symbol.terms();
  for (const auto& [n, c] : outer) {
    if (f_smaller)
      s += c * std::conj(symbol.coeff(n));
    else
      s += f.coeff(n) * std::conj(c);
  }
  return s;
}

long long apply_functional_integer(const HankelSymbol& symbol, const Polynomial& f) {
  if (symbol.dimension() != f.dimension())
    throw std::invalid_argument("apply_functional_integer: dimension mismatch");
  long long s = 0;
  for (const auto& [n, c] : f.terms()) {
    long long a = 0, rho = 0;
    if (!integral_real(c, a))
      throw std::invalid_argument("apply_functional_integer: non-integer coefficient in f");
    if (!integral_real(symbol.coeff(n), rho))
      throw std::invalid_argument("apply_functional_integer: non-integer coefficient in symbol");
    s += a * rho;
  }
  return s;
}

Coefficient bilinear(const HankelSymbol& symbol, const Polynomial& f,
                     const Polynomial& g) {
  return apply_functional(symbol, f * g);
}

SchurWeights helson_weights(int d, const std::vector<MonomialId>& J) {
  const std::vector<MonomialId> closure = divisor_closure(pair_product_set(d));
  SchurWeights w;
  w.half_log2.emplace();
  for (const MonomialId j : J) {
    if (!std::binary_search(closure.begin(), closure.end(), j))
      throw std::invalid_argument("helson_weights: id " + std::to_string(j) +
                                  " is outside the divisor closure for d = " +
                                  std::to_string(d));
    const int omega = big_omega(j);
    (*w.half_log2)[j] = -omega;
    w.values[j] = std::exp2(-0.5 * omega);
  }
  return w;
}

double schur_bound(const HankelMatrix& matrix, const SchurWeights& weights) {
  if (!matrix.is_nonnegative())
    throw std::invalid_argument(
        "schur_bound: matrix must be real with nonnegative entries");
  const auto& index = matrix.index_set();
  const int n = matrix.size();
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto it = weights.values.find(index[static_cast<std::size_t>(k)]);
    if (it == weights.values.end() || !(it->second > 0.0))
      throw std::invalid_argument("schur_bound: weights must be positive on the index set");
    c[static_cast<std::size_t>(k)] = it->second;
  }
  double bound = 0.0;
  for (int r = 0; r < n; ++r) {
    double row = 0.0;
    for (int k = 0; k < n; ++k)
      row += matrix.entry(r, k).real() * c[static_cast<std::size_t>(k)];
    bound = std::max(bound, row / c[static_cast<std::size_t>(r)]);
  }
  return bound;
}

RowIdentityReport row_sum_identity_check(int d) {
  const PairProductSet I = pair_product_set(d);
  const std::vector<MonomialId> closure = divisor_closure(I);
  RowIdentityReport report;
  report.d = d;
  report.ok = true;
  report.rows.reserve(closure.size());
  for (const MonomialId j : closure) {
    RowIdentityRow row;
    row.j = j;
    row.omega = big_omega(j);
    for (const MonomialId k : closure) {
      const MonomialId product = checked_mul(j, k);
      if (!I.contains(product)) continue;
      ++row.count;
      if (big_omega(k) != d / 2 - row.omega) row.complement_uniform = false;
    }
    row.expected = std::uint64_t{1} << (d / 2 - row.omega);
    if (row.count != row.expected || !row.complement_uniform) report.ok = false;
    report.rows.push_back(row);
  }
  return report;
}

ExactDyadic schur_bound_exact(int d) {
  const RowIdentityReport report = row_sum_identity_check(d);
  // row sum over weights: count_j * 2^{-(d/2-Omega(j))/2}; dividing by
  // c_j = 2^{-Omega(j)/2} gives ratio count_j * 2^{(2*Omega(j) - d/2)/2}.
  int max_half = 0;
  bool first = true;
  for (const RowIdentityRow& row : report.rows) {
    if (row.count == 0 || (row.count & (row.count - 1)) != 0)
      throw std::domain_error(
          "schur_bound_exact: row count is not a power of two; bound is not an "
          "exact power of sqrt(2)");
    int log2_count = 0;
    while ((std::uint64_t{1} << log2_count) < row.count) ++log2_count;
    const int half = 2 * log2_count + 2 * row.omega - d / 2;
    if (first || half > max_half) max_half = half;
    first = false;
  }
  ExactDyadic out;
  out.half_log2 = max_half;
  out.value = std::exp2(0.5 * max_half);
  return out;
}

std::string to_string(NormResult::Method method) {
  switch (method) {
    case NormResult::Method::exact_svd: return "exact-svd";
    case NormResult::Method::power_iteration: return "power-iteration";
    case NormResult::Method::tensor_closed_form: return "tensor-closed-form";
  }
  return "unknown";
}

NormResult power_iteration_norm(const HankelMatrix& matrix, double tol,
                                int max_iterations) {
  const int n = matrix.size();
  std::vector<Coefficient> x(static_cast<std::size_t>(n),
                             Coefficient{1.0 / std::sqrt(static_cast<double>(n))});
  std::vector<Coefficient> y, g;
  double lambda_prev = 0.0;
  NormResult out;
  out.method = NormResult::Method::power_iteration;
  for (int it = 1; it <= max_iterations; ++it) {
    matrix.apply(x, y);
    double lambda = 0.0;  // Rayleigh quotient of the Gram operator at unit x
    for (const Coefficient v : y) lambda += std::norm(v);
    out.iterations = it;
    // relative Rayleigh-quotient change; an absolute test at scale lambda
    // would drown in the roundoff of the matvec sums
    out.residual = std::abs(lambda - lambda_prev) / std::max(1.0, lambda);
    if (it > 1 && out.residual < tol) {
      out.value = std::sqrt(lambda);
      return out;
    }
    lambda_prev = lambda;
    matrix.apply_adjoint(y, g);
    double norm_g = 0.0;
    for (const Coefficient v : g) norm_g += std::norm(v);
    norm_g = std::sqrt(norm_g);
    if (norm_g == 0.0) {  // x is annihilated; the matrix is zero on its span
      out.value = std::sqrt(lambda);
      return out;
    }
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = g[i] / norm_g;
  }
  throw ConvergenceError("power_iteration_norm: iteration cap reached",
                         std::sqrt(lambda_prev), out.residual, max_iterations);
}

NormResult operator_norm(const HankelMatrix& matrix, double tol, int max_iterations) {
  if (matrix.is_dense()) {
    NormResult out;
    out.method = NormResult::Method::exact_svd;
    if (matrix.is_real()) {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix.dense().real());
      out.value = svd.singularValues()(0);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix.dense());
      out.value = svd.singularValues()(0);
    }
    return out;
  }
  return power_iteration_norm(matrix, tol, max_iterations);
}

double tensor_norm_closed_form(int d) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("tensor_norm_closed_form: dimension must be even and >= 2");
  Eigen::Matrix3d block;
  block << 0, 1, 1,
           1, 0, 0,
           1, 0, 0;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(block);
  return std::pow(svd.singularValues()(0), d / 2);
}

}  // namespace polyhankel
