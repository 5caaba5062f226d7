#include "polyhankel/weak_factorization.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace polyhankel {

namespace {

constexpr double kSingularValueDrop = 1e-10;

std::vector<MonomialId> all_divisors(MonomialId n, int d) {
  const MultiIndex e = factorize(n, d);
  std::vector<MonomialId> divisors{1};
  for (int i = 0; i < d; ++i) {
    if (e[i] == 0) continue;
    const std::uint64_t p = nth_prime(static_cast<std::size_t>(i) + 1);
    const std::size_t base = divisors.size();
    MonomialId power = 1;
    for (int t = 1; t <= e[i]; ++t) {
      power = checked_mul(power, p);
      for (std::size_t b = 0; b < base; ++b)
        divisors.push_back(checked_mul(divisors[b], power));
    }
  }
  std::sort(divisors.begin(), divisors.end());
  return divisors;
}

struct FiberIndex {
  // cells of the grid grouped by their product id; the fibers partition the
  // whole grid, which makes the constraint projection a per-fiber mean shift
  std::map<MonomialId, std::vector<std::pair<int, int>>> fibers;
  std::map<MonomialId, Coefficient> targets;

  static FiberIndex build(const Polynomial& f, const FactorizationGrid& grid) {
    FiberIndex index;
    for (int r = 0; r < static_cast<int>(grid.rows.size()); ++r)
      for (int c = 0; c < static_cast<int>(grid.cols.size()); ++c)
        index.fibers[checked_mul(grid.rows[static_cast<std::size_t>(r)],
                                 grid.cols[static_cast<std::size_t>(c)])]
            .emplace_back(r, c);
    for (const auto& [n, coeff] : f.terms()) {
      if (!index.fibers.contains(n))
        throw std::invalid_argument(
            "wf_norm_primal: support monomial " + std::to_string(n) +
            " is not a product of grid indices; the problem is infeasible");
      index.targets[n] = coeff;
    }
    return index;
  }

  void project(Eigen::MatrixXcd& m) const {
    for (const auto& [n, cells] : fibers) {
      Coefficient sum = 0.0;
      for (const auto& [r, c] : cells) sum += m(r, c);
      const auto target_it = targets.find(n);
      const Coefficient target = target_it == targets.end() ? Coefficient{0.0}
                                                            : target_it->second;
      const Coefficient shift = (target - sum) / static_cast<double>(cells.size());
      for (const auto& [r, c] : cells) m(r, c) += shift;
    }
  }
};

Eigen::MatrixXcd singular_value_soft_threshold(const Eigen::MatrixXcd& m, double tau) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - tau, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

double nuclear_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

}  // namespace

FactorizationGrid default_grid(const Polynomial& f) {
  if (f.is_zero())
    throw std::invalid_argument("default_grid: polynomial must be nonzero");
  std::set<MonomialId> ids;
  for (const auto& [n, c] : f.terms()) {
    const std::vector<MonomialId> divisors = all_divisors(n, f.dimension());
    ids.insert(divisors.begin(), divisors.end());
  }
  FactorizationGrid grid;
  grid.rows.assign(ids.begin(), ids.end());
  grid.cols = grid.rows;
  return grid;
}

double wf_cost(const ExplicitFactorization& factorization) {
  double cost = 0.0;
  for (const auto& [g, h] : factorization.pairs) cost += h2_norm(g) * h2_norm(h);
  return cost;
}

Polynomial reconstruct(const ExplicitFactorization& factorization) {
  Polynomial sum(factorization.d);
  for (const auto& [g, h] : factorization.pairs) sum = sum + g * h;
  return sum;
}

WfSolveOutput wf_norm_primal(const Polynomial& f, const FactorizationGrid& grid,
                             double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("wf_norm_primal: tol must be positive");
  WfSolveOutput out;
  out.factorization.d = f.dimension();
  if (f.is_zero()) return out;
  if (grid.rows.empty() || grid.cols.empty())
    throw std::invalid_argument("wf_norm_primal: grid must be nonempty");

  const FiberIndex fiber_index = FiberIndex::build(f, grid);
  const int rows = static_cast<int>(grid.rows.size());
  const int cols = static_cast<int>(grid.cols.size());

  double rho = 1.0;
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(rows, cols);
  fiber_index.project(z);  // feasible start
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::MatrixXcd x, z_prev;

  double primal_res = 0.0, dual_res = 0.0;
  int iterations = 0;
  bool converged = false;
  while (iterations < max_iterations) {
    ++iterations;
    x = singular_value_soft_threshold(z - u, 1.0 / rho);
    z_prev = z;
    z = x + u;
    fiber_index.project(z);
    u += x - z;
    primal_res = (x - z).norm();
    dual_res = rho * (z - z_prev).norm();
    if (std::max(primal_res, dual_res) < tol) {
      converged = true;
      break;
    }
    // residual balancing keeps the two rates comparable
    if (primal_res > 10.0 * dual_res) {
      rho *= 2.0;
      u /= 2.0;
    } else if (dual_res > 10.0 * primal_res) {
      rho /= 2.0;
      u *= 2.0;
    }
  }

  out.result.iterations = iterations;
  out.result.primal_residual = primal_res;
  out.result.dual_residual = dual_res;
  out.result.upper = nuclear_norm(z);
  if (!converged)
    throw ConvergenceError("wf_norm_primal: iteration cap reached", out.result.upper,
                           std::max(primal_res, dual_res), iterations);

  // dual certificate: rho*u lies in the range of the constraint adjoint, so
  // it is constant on fibers; |<a, y>| / sigma_max bounds every feasible
  // nuclear norm from below, on any grid
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(rows, cols);
  Coefficient pairing = 0.0;
  for (const auto& [n, cells] : fiber_index.fibers) {
    Coefficient mean = 0.0;
    for (const auto& [r, c] : cells) mean += rho * u(r, c);
    mean /= static_cast<double>(cells.size());
    for (const auto& [r, c] : cells) w(r, c) = mean;
    const auto target_it = fiber_index.targets.find(n);
    if (target_it != fiber_index.targets.end())
      pairing += target_it->second * std::conj(mean);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> wsvd(w);
  const double w_norm = wsvd.singularValues().size() > 0 ? wsvd.singularValues()(0) : 0.0;
  out.result.lower = w_norm > 1e-14 ? std::abs(pairing) / w_norm : 0.0;

  // explicit pairs from the SVD of the feasible point
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    const double sigma = svd.singularValues()(i);
    if (sigma < kSingularValueDrop) continue;
    const double scale = std::sqrt(sigma);
    Polynomial g(f.dimension()), h(f.dimension());
    for (int r = 0; r < rows; ++r)
      g.add_term(grid.rows[static_cast<std::size_t>(r)], scale * svd.matrixU()(r, i));
    for (int c = 0; c < cols; ++c)
      h.add_term(grid.cols[static_cast<std::size_t>(c)],
                 scale * std::conj(svd.matrixV()(c, i)));
    out.factorization.pairs.emplace_back(std::move(g), std::move(h));
  }
  return out;
}

double wf_norm_dual(const Polynomial& f, const HankelSymbol& symbol,
                    const FactorizationGrid& grid) {
  if (grid.rows.empty() || grid.cols.empty())
    throw std::invalid_argument("wf_norm_dual: grid must be nonempty");
  double norm = 0.0;
  if (grid.rows == grid.cols) {
    norm = operator_norm(build_matrix(symbol, grid.rows)).value;
  } else {
    Eigen::MatrixXcd m(grid.rows.size(), grid.cols.size());
    for (std::size_t r = 0; r < grid.rows.size(); ++r)
      for (std::size_t c = 0; c < grid.cols.size(); ++c)
        m(static_cast<int>(r), static_cast<int>(c)) =
            symbol.coeff(checked_mul(grid.rows[r], grid.cols[c]));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    norm = svd.singularValues()(0);
  }
  if (!(norm > 0.0))
    throw std::invalid_argument("wf_norm_dual: symbol has zero norm on the grid");
  return std::abs(apply_functional(symbol, f)) / norm;
}

}  // namespace polyhankel
