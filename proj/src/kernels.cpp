#include "polyhankel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyhankel::kernels {

namespace {

inline double abs_pow(const Coefficient v, const double p) {
  if (p == 1.0) return std::abs(v);
  if (p == 2.0) return std::norm(v);
  return std::pow(std::abs(v), p);
}

std::uint64_t grid_size(int d, int nodes) {
  std::uint64_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::uint64_t>(nodes);
  return total;
}

// Per-dimension, per-term node tables: exp(i * e_{t,j} * 2*pi*m / N).
std::vector<Coefficient> build_tables(const EvalPlan& plan, int nodes) {
  const std::size_t t_count = plan.terms();
  std::vector<Coefficient> tables(static_cast<std::size_t>(plan.d) * t_count * nodes);
  for (int j = 0; j < plan.d; ++j)
    for (std::size_t t = 0; t < t_count; ++t)
      for (int m = 0; m < nodes; ++m) {
        const double angle =
            plan.exponent(t, j) * (2.0 * std::numbers::pi * m / nodes);
        tables[(static_cast<std::size_t>(j) * t_count + t) * nodes + m] =
            std::polar(1.0, angle);
      }
  return tables;
}

}  // namespace

EvalPlan EvalPlan::from(const Polynomial& f) {
  EvalPlan plan;
  plan.d = f.dimension();
  plan.coeffs.reserve(f.term_count());
  plan.exponents.reserve(f.term_count() * static_cast<std::size_t>(plan.d));
  for (const auto& [n, c] : f.terms()) {
    const MultiIndex e = factorize(n, plan.d);
    plan.exponents.insert(plan.exponents.end(), e.begin(), e.end());
    plan.coeffs.push_back(c);
  }
  return plan;
}

EvalPlan EvalPlan::from(const TrigPolynomial& f) {
  EvalPlan plan;
  plan.d = f.dimension();
  for (const auto& [e, c] : f.terms()) {
    plan.exponents.insert(plan.exponents.end(), e.begin(), e.end());
    plan.coeffs.push_back(c);
  }
  return plan;
}

// Walks the tensor grid with a mixed-radix odometer (dimension 0 fastest) and
// keeps per-term suffix products P[t][j] = E_j * E_{j+1} * ... * E_{d-1}, so a
// step only recomputes the dimensions whose digit changed.  Suffix products
// are always rebuilt top-down with the same association, which keeps the
// result bit-identical for any block partitioning.
double grid_abs_pow_mean(const EvalPlan& plan, double p, int nodes_per_dim,
                         bool parallel) {
  if (nodes_per_dim < 2)
    throw std::invalid_argument("grid_abs_pow_mean: need at least 2 nodes per dimension");
  const int d = plan.d;
  const std::size_t t_count = plan.terms();
  const std::uint64_t total = grid_size(d, nodes_per_dim);
  if (t_count == 0) return 0.0;

  const std::vector<Coefficient> tables = build_tables(plan, nodes_per_dim);
  const std::uint64_t block = kReductionBlock;
  const std::uint64_t nblocks = (total - 1) / block + 1;
  std::vector<double> partial(nblocks, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t hi = std::min(total, lo + block);

    std::vector<int> digits(d, 0);
    std::uint64_t rest = lo;
    for (int j = 0; j < d; ++j) {
      digits[j] = static_cast<int>(rest % nodes_per_dim);
      rest /= nodes_per_dim;
    }
    // suffix[t*(d+1)+j] = prod_{i>=j} E_i;  suffix[t*(d+1)+d] = 1
    std::vector<Coefficient> suffix(t_count * (d + 1));
    for (std::size_t t = 0; t < t_count; ++t) {
      suffix[t * (d + 1) + d] = 1.0;
      for (int j = d - 1; j >= 0; --j)
        suffix[t * (d + 1) + j] =
            tables[(static_cast<std::size_t>(j) * t_count + t) * nodes_per_dim + digits[j]] *
            suffix[t * (d + 1) + j + 1];
    }

    double s = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      Coefficient v = 0.0;
      for (std::size_t t = 0; t < t_count; ++t)
        v += plan.coeffs[t] * suffix[t * (d + 1)];
      s += abs_pow(v, p);

      if (i + 1 == hi) break;
      int changed = 0;
      while (true) {
        if (++digits[changed] < nodes_per_dim) break;
        digits[changed] = 0;
        ++changed;
      }
      for (std::size_t t = 0; t < t_count; ++t)
        for (int j = changed; j >= 0; --j)
          suffix[t * (d + 1) + j] =
              tables[(static_cast<std::size_t>(j) * t_count + t) * nodes_per_dim + digits[j]] *
              suffix[t * (d + 1) + j + 1];
    }
    partial[static_cast<std::size_t>(b)] = s;
  }

  double sum = 0.0;
  for (const double s : partial) sum += s;
  return sum / static_cast<double>(total);
}

McMoments mc_abs_pow_moments(const EvalPlan& plan, double p, std::uint64_t samples,
                             std::uint64_t seed, bool parallel) {
  const int d = plan.d;
  const std::size_t t_count = plan.terms();
  const std::uint64_t block = kReductionBlock;
  const std::uint64_t nblocks = samples == 0 ? 0 : (samples - 1) / block + 1;
  std::vector<double> part_sum(nblocks, 0.0), part_sq(nblocks, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t hi = std::min(samples, lo + block);
    std::vector<double> theta(d);
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      for (int j = 0; j < d; ++j)
        theta[j] = 2.0 * std::numbers::pi *
                   uniform01(seed, i * static_cast<std::uint64_t>(d) + j);
      Coefficient v = 0.0;
      for (std::size_t t = 0; t < t_count; ++t) {
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += plan.exponent(t, j) * theta[j];
        v += plan.coeffs[t] * Coefficient{std::cos(phase), std::sin(phase)};
      }
      const double x = abs_pow(v, p);
      s1 += x;
      s2 += x * x;
    }
    part_sum[static_cast<std::size_t>(b)] = s1;
    part_sq[static_cast<std::size_t>(b)] = s2;
  }

  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    sum += part_sum[b];
    sumsq += part_sq[b];
  }
  McMoments out;
  out.samples = samples;
  if (samples == 0) return out;
  const double n = static_cast<double>(samples);
  out.mean = sum / n;
  if (samples >= 2)
    out.variance = std::max(0.0, (sumsq - n * out.mean * out.mean) / (n - 1.0));
  return out;
}

void matvec(const std::vector<Coefficient>& a, int rows, int cols,
            const std::vector<Coefficient>& x, std::vector<Coefficient>& y,
            bool parallel) {
  if (a.size() != static_cast<std::size_t>(rows) * cols || x.size() != static_cast<std::size_t>(cols))
    throw std::invalid_argument("matvec: shape mismatch");
  y.assign(static_cast<std::size_t>(rows), Coefficient{0.0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < rows; ++i) {
    Coefficient s = 0.0;
    const std::size_t off = static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) s += a[off + j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
}

void matvec(const CsrMatrix& a, const std::vector<Coefficient>& x,
            std::vector<Coefficient>& y, bool parallel) {
  if (x.size() != static_cast<std::size_t>(a.cols))
    throw std::invalid_argument("matvec: shape mismatch");
  y.assign(static_cast<std::size_t>(a.rows), Coefficient{0.0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < a.rows; ++i) {
    Coefficient s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      s += a.val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)])];
    y[static_cast<std::size_t>(i)] = s;
  }
}

namespace reference {

double grid_abs_pow_mean(const EvalPlan& plan, double p, int nodes_per_dim) {
  if (nodes_per_dim < 2)
    throw std::invalid_argument("grid_abs_pow_mean: need at least 2 nodes per dimension");
  const int d = plan.d;
  const std::uint64_t total = grid_size(d, nodes_per_dim);
  if (plan.terms() == 0) return 0.0;
  double sum = 0.0;
  std::vector<double> theta(d);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t rest = i;
    for (int j = 0; j < d; ++j) {
      theta[j] = 2.0 * std::numbers::pi * static_cast<double>(rest % nodes_per_dim) /
                 nodes_per_dim;
      rest /= nodes_per_dim;
    }
    Coefficient v = 0.0;
    for (std::size_t t = 0; t < plan.terms(); ++t) {
      double phase = 0.0;
      for (int j = 0; j < d; ++j) phase += plan.exponent(t, j) * theta[j];
      v += plan.coeffs[t] * Coefficient{std::cos(phase), std::sin(phase)};
    }
    sum += abs_pow(v, p);
  }
  return sum / static_cast<double>(total);
}

McMoments mc_abs_pow_moments(const EvalPlan& plan, double p, std::uint64_t samples,
                             std::uint64_t seed) {
  const int d = plan.d;
  McMoments out;
  out.samples = samples;
  if (samples == 0) return out;
  double s1 = 0.0, s2 = 0.0;
  std::vector<double> theta(d);
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (int j = 0; j < d; ++j)
      theta[j] = 2.0 * std::numbers::pi *
                 uniform01(seed, i * static_cast<std::uint64_t>(d) + j);
    Coefficient v = 0.0;
    for (std::size_t t = 0; t < plan.terms(); ++t) {
      double phase = 0.0;
      for (int j = 0; j < d; ++j) phase += plan.exponent(t, j) * theta[j];
      v += plan.coeffs[t] * Coefficient{std::cos(phase), std::sin(phase)};
    }
    const double x = abs_pow(v, p);
    s1 += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(samples);
  out.mean = s1 / n;
  if (samples >= 2)
    out.variance = std::max(0.0, (s2 - n * out.mean * out.mean) / (n - 1.0));
  return out;
}

void matvec(const std::vector<Coefficient>& a, int rows, int cols,
            const std::vector<Coefficient>& x, std::vector<Coefficient>& y) {
  y.assign(static_cast<std::size_t>(rows), Coefficient{0.0});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      y[static_cast<std::size_t>(i)] +=
          a[static_cast<std::size_t>(i) * cols + j] * x[static_cast<std::size_t>(j)];
}

}  // namespace reference

}  // namespace polyhankel::kernels
