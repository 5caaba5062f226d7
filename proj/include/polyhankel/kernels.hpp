#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "polyhankel/polynomial.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyhankel::kernels {

// ---------------------------------------------------------------------------
// Counter-based RNG (splitmix64 finalizer in counter mode).  Output depends
// only on (seed, counter), so a stream can be sampled at any index in any
// order and still reproduce bit-exactly across thread counts and platforms.
// ---------------------------------------------------------------------------

inline std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_mix(seed, counter) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Deterministic blocked reduction.  The index range is cut into fixed-size
// blocks; each block is summed sequentially and block partials are combined
// in block order.  The result is therefore independent of the thread count
// (bit-identical between parallel and serial execution).
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kReductionBlock = 4096;

template <class Fn>
double blocked_sum(std::uint64_t n, Fn&& fn, bool parallel,
                   std::uint64_t block = kReductionBlock) {
  const std::uint64_t nblocks = n == 0 ? 0 : (n - 1) / block + 1;
  std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t hi = std::min(n, lo + block);
    double s = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) s += fn(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (const double s : partial) total += s;
  return total;
}

// ---------------------------------------------------------------------------
// Evaluation plan: the flat term table used by the grid and sampling kernels.
// ---------------------------------------------------------------------------

struct EvalPlan {
  int d = 0;
  std::vector<int> exponents;  // row-major, terms() x d; entries may be negative
  std::vector<Coefficient> coeffs;

  std::size_t terms() const { return coeffs.size(); }
  int exponent(std::size_t term, int dim) const {
    return exponents[term * static_cast<std::size_t>(d) + static_cast<std::size_t>(dim)];
  }

  static EvalPlan from(const Polynomial& f);
  static EvalPlan from(const TrigPolynomial& f);
};

// Mean of |f(theta)|^p over the full tensor grid of nodes^d equispaced
// angles.  Deterministic blocked reduction; `parallel` toggles OpenMP.
// The caller is responsible for budget checks on nodes^d.
double grid_abs_pow_mean(const EvalPlan& plan, double p, int nodes_per_dim,
                         bool parallel);

struct McMoments {
  double mean = 0.0;      // sample mean of |f|^p
  double variance = 0.0;  // unbiased sample variance of |f|^p
  std::uint64_t samples = 0;
};

// Monte Carlo moments of |f(theta)|^p over uniform angles.  Sample i draws
// its angles from counters [i*d, (i+1)*d), so the stream is reproducible for
// any partitioning.
McMoments mc_abs_pow_moments(const EvalPlan& plan, double p, std::uint64_t samples,
                             std::uint64_t seed, bool parallel);

// Row-parallel dense mat-vec: y = A x.  Each output entry is a sequential
// dot product, so results do not depend on the thread count.
void matvec(const std::vector<Coefficient>& a, int rows, int cols,
            const std::vector<Coefficient>& x, std::vector<Coefficient>& y,
            bool parallel);

// Compressed sparse rows; val/col sorted by row via row_ptr.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // size rows+1
  std::vector<int> col;
  std::vector<Coefficient> val;
};

void matvec(const CsrMatrix& a, const std::vector<Coefficient>& x,
            std::vector<Coefficient>& y, bool parallel);

// Plain sequential implementations kept as references for the parallel
// kernels; tests compare against these and the benchmark times both.
namespace reference {

double grid_abs_pow_mean(const EvalPlan& plan, double p, int nodes_per_dim);
McMoments mc_abs_pow_moments(const EvalPlan& plan, double p, std::uint64_t samples,
                             std::uint64_t seed);
void matvec(const std::vector<Coefficient>& a, int rows, int cols,
            const std::vector<Coefficient>& x, std::vector<Coefficient>& y);

}  // namespace reference

}  // namespace polyhankel::kernels
