#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyhankel {

// Iterative solver hit its iteration cap before reaching the requested
// tolerance.  Carries the best estimate and the final residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double residual,
                   int iterations)
      : std::runtime_error(what + " (best estimate " + std::to_string(estimate) +
                           ", residual " + std::to_string(residual) + " after " +
                           std::to_string(iterations) + " iterations)"),
        estimate_(estimate),
        residual_(residual),
        iterations_(iterations) {}

  double estimate() const { return estimate_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double estimate_;
  double residual_;
  int iterations_;
};

// A quadrature request would exceed the configured evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : std::runtime_error("quadrature budget exceeded: " + std::to_string(required) +
                           " evaluations requested, budget " + std::to_string(budget) +
                           "; use the monte-carlo or separable path instead"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace polyhankel
