// Times the OpenMP kernels against their serial references on fixed-size
// problems and reports the speedup.  Values are cross-checked so a kernel
// cannot silently drift from its reference.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "polyhankel/certificate.hpp"
#include "polyhankel/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace polyhankel;
using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (ms < best) best = ms;
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, double rel_diff) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   rel diff %.3e\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, rel_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  // tensor quadrature of |z1 + z2| on a 2048^2 grid
  {
    const Polynomial f = Polynomial::variable(2, 1) + Polynomial::variable(2, 2);
    const kernels::EvalPlan plan = kernels::EvalPlan::from(f);
    double serial_val = 0.0, parallel_val = 0.0;
    const double serial_ms =
        time_ms([&] { serial_val = kernels::reference::grid_abs_pow_mean(plan, 1.0, 2048); }, 3);
    const double parallel_ms =
        time_ms([&] { parallel_val = kernels::grid_abs_pow_mean(plan, 1.0, 2048, true); }, 3);
    report("grid quadrature 2048^2", serial_ms, parallel_ms,
           std::abs(serial_val - parallel_val) / std::abs(serial_val));
  }

  // Monte Carlo moments of the d=6 construction polynomial, 2e6 samples
  {
    const Construction c = build_construction(6);
    const kernels::EvalPlan plan = kernels::EvalPlan::from(c.f);
    kernels::McMoments serial_m, parallel_m;
    const double serial_ms = time_ms(
        [&] { serial_m = kernels::reference::mc_abs_pow_moments(plan, 1.0, 2000000, 0); }, 3);
    const double parallel_ms = time_ms(
        [&] { parallel_m = kernels::mc_abs_pow_moments(plan, 1.0, 2000000, 0, true); }, 3);
    report("monte carlo d=6 2e6", serial_ms, parallel_ms,
           std::abs(serial_m.mean - parallel_m.mean) / serial_m.mean);
  }

  // dense mat-vec, 1024 x 1024, repeated; rows are long enough that the
  // per-call parallel region amortizes
  {
    const int n = 1024;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Coefficient> flat(static_cast<std::size_t>(n) * n);
    for (auto& v : flat) v = {dist(rng), dist(rng)};
    std::vector<Coefficient> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(double(n));
    std::vector<Coefficient> y_serial, y_parallel;
    const int reps = 200;
    const double serial_ms = time_ms(
        [&] {
          for (int r = 0; r < reps; ++r)
            kernels::reference::matvec(flat, n, n, x, y_serial);
        },
        3);
    const double parallel_ms = time_ms(
        [&] {
          for (int r = 0; r < reps; ++r) kernels::matvec(flat, n, n, x, y_parallel, true);
        },
        3);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(y_serial[static_cast<std::size_t>(i)] -
                                     y_parallel[static_cast<std::size_t>(i)]));
      scale = std::max(scale, std::abs(y_serial[static_cast<std::size_t>(i)]));
    }
    report("dense matvec 1024^2 x200", serial_ms, parallel_ms, diff / scale);
  }

  // power iteration on the sparse d=12 construction matrix (729 x 729)
  {
    const Construction c = build_construction(12);
    const HankelMatrix matrix = build_matrix(c.psi, c.index_set);
    std::printf("%-28s storage %s, %llu nonzeros\n", "hankel d=12",
                matrix.is_dense() ? "dense" : "sparse",
                static_cast<unsigned long long>(matrix.nonzeros()));
    NormResult result;
    const double ms = time_ms([&] { result = power_iteration_norm(matrix); }, 3);
    std::printf("%-28s %9.2f ms   value %.12f   iterations %d\n",
                "  power iteration", ms, result.value, result.iterations);
  }

  return 0;
}
