#include "polyhankel/lp_norm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "polyhankel/kernels.hpp"

namespace polyhankel {

namespace {

constexpr double kPi = std::numbers::pi;

void check_p(double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("lp norm: p must be >= 1");
}

std::uint64_t checked_grid_total(int d, int nodes, std::uint64_t budget) {
  unsigned __int128 total = 1;
  for (int j = 0; j < d; ++j) {
    total *= static_cast<unsigned>(nodes);
    if (total > budget)
      throw BudgetExceeded(total > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(total),
                           budget);
  }
  return static_cast<std::uint64_t>(total);
}

LpEstimate quadrature_impl(const kernels::EvalPlan& plan, double p, int nodes,
                           std::uint64_t budget, bool parallel) {
  check_p(p);
  if (nodes < 2)
    throw std::invalid_argument("lp_norm_quadrature: nodes_per_dim must be >= 2");
  checked_grid_total(plan.d, nodes, budget);
  const double mean = kernels::grid_abs_pow_mean(plan, p, nodes, parallel);
  LpEstimate out;
  out.method = LpEstimate::Method::tensor_quadrature;
  out.value = mean <= 0.0 ? 0.0 : std::pow(mean, 1.0 / p);
  return out;
}

LpEstimate monte_carlo_impl(const kernels::EvalPlan& plan, double p,
                            std::uint64_t samples, std::uint64_t seed, bool parallel) {
  check_p(p);
  if (samples < 2)
    throw std::invalid_argument("lp_norm_monte_carlo: need at least 2 samples");
  const kernels::McMoments m = kernels::mc_abs_pow_moments(plan, p, samples, seed, parallel);
  LpEstimate out;
  out.method = LpEstimate::Method::monte_carlo;
  if (m.mean <= 0.0) return out;
  out.value = std::pow(m.mean, 1.0 / p);
  // delta method: se(mean^{1/p}) = (1/p) mean^{1/p-1} se(mean)
  const double se_mean = std::sqrt(m.variance / static_cast<double>(samples));
  out.error_bound = std::pow(m.mean, 1.0 / p - 1.0) * se_mean / p;
  return out;
}

// --- one-dimensional machinery for the separable path ----------------------

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Golub-Welsch: eigen-decomposition of the Jacobi matrix.
GaussLegendre gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    gl.nodes[k] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    gl.weights[k] = 2.0 * v * v;
  }
  return gl;
}

Coefficient eval_univariate(const std::vector<Coefficient>& coeffs, double t) {
  Coefficient v = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    v += coeffs[k] * std::polar(1.0, static_cast<double>(k) * t);
  return v;
}

// Angles in [0, 2pi) of the unit-modulus roots of sum_k coeffs[k] w^k.
std::vector<double> unit_circle_roots(const std::vector<Coefficient>& coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < degree; ++k)
    companion(k, degree - 1) = -coeffs[static_cast<std::size_t>(k)] / coeffs.back();
  const Eigen::VectorXcd roots = companion.eigenvalues();
  std::vector<double> angles;
  for (int k = 0; k < degree; ++k) {
    const Coefficient r = roots(k);
    if (std::abs(std::abs(r) - 1.0) < 1e-8) {
      double a = std::arg(r);
      if (a < 0.0) a += 2.0 * kPi;
      angles.push_back(a);
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               angles.end());
  return angles;
}

// Mean of |q(e^{it})|^p over a period.  Panels are split at the zeros of q on
// the circle, where |q|^p loses smoothness, so Gauss-Legendre converges
// spectrally on each piece.
double univariate_abs_pow_mean(std::vector<Coefficient> coeffs, double p,
                               int nodes_per_arc) {
  while (!coeffs.empty() && coeffs.front() == 0.0)
    coeffs.erase(coeffs.begin());  // |w^k| = 1 on the circle
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) return 0.0;
  if (coeffs.size() == 1) return std::pow(std::abs(coeffs[0]), p);

  std::vector<double> cuts = unit_circle_roots(coeffs);
  std::vector<std::pair<double, double>> arcs;
  if (cuts.empty()) {
    arcs.emplace_back(0.0, 2.0 * kPi);
  } else {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      arcs.emplace_back(cuts[i], cuts[i + 1]);
    arcs.emplace_back(cuts.back(), cuts.front() + 2.0 * kPi);
  }

  const int n_gl = std::clamp(nodes_per_arc, 4, 200);
  const GaussLegendre gl = gauss_legendre(n_gl);
  double integral = 0.0;
  for (const auto& [a, b] : arcs) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (kPi / 2.0))));
    const double h = (b - a) / panels;
    for (int s = 0; s < panels; ++s) {
      const double lo = a + s * h;
      double acc = 0.0;
      for (int k = 0; k < n_gl; ++k) {
        const double t = lo + 0.5 * h * (gl.nodes[static_cast<std::size_t>(k)] + 1.0);
        acc += gl.weights[static_cast<std::size_t>(k)] *
               std::pow(std::abs(eval_univariate(coeffs, t)), p);
      }
      integral += 0.5 * h * acc;
    }
  }
  return integral / (2.0 * kPi);
}

struct UnivariateReduction {
  std::vector<Coefficient> coeffs;
};

// Reduces a factor to a function of one angle.  A genuinely univariate factor
// keeps its coefficient profile; a two-term factor c1 z^a + c2 z^b has |.|
// distributed as |c1 + c2 e^{it}| for uniform t because <b-a, theta> mod 2pi
// is uniform whenever b != a.
UnivariateReduction reduce_factor(const Polynomial& factor,
                                  const std::vector<int>& active_vars) {
  UnivariateReduction red;
  if (factor.is_zero()) return red;  // empty profile: the whole product is 0
  if (active_vars.empty()) {
    red.coeffs = {factor.coeff(1)};
    return red;
  }
  if (active_vars.size() == 1) {
    const int var = active_vars[0];
    int max_e = 0;
    for (const auto& [n, c] : factor.terms())
      max_e = std::max(max_e, factorize(n, factor.dimension())[var]);
    red.coeffs.assign(static_cast<std::size_t>(max_e) + 1, Coefficient{0.0});
    for (const auto& [n, c] : factor.terms())
      red.coeffs[static_cast<std::size_t>(factorize(n, factor.dimension())[var])] = c;
    return red;
  }
  if (factor.term_count() == 2) {
    auto it = factor.terms().begin();
    const Coefficient c1 = it->second;
    const Coefficient c2 = std::next(it)->second;
    red.coeffs = {c1, c2};
    return red;
  }
  throw std::invalid_argument(
      "lp_norm_separable: factor is neither univariate nor a two-term product; "
      "no exact one-dimensional reduction");
}

}  // namespace

std::string to_string(LpEstimate::Method method) {
  switch (method) {
    case LpEstimate::Method::tensor_quadrature: return "tensor-quadrature";
    case LpEstimate::Method::monte_carlo: return "monte-carlo";
    case LpEstimate::Method::separable_exact: return "separable-exact";
  }
  return "unknown";
}

LpEstimate lp_norm_quadrature(const Polynomial& f, double p, int nodes_per_dim,
                              std::uint64_t budget, bool parallel) {
  return quadrature_impl(kernels::EvalPlan::from(f), p, nodes_per_dim, budget, parallel);
}

LpEstimate lp_norm_quadrature(const TrigPolynomial& f, double p, int nodes_per_dim,
                              std::uint64_t budget, bool parallel) {
  return quadrature_impl(kernels::EvalPlan::from(f), p, nodes_per_dim, budget, parallel);
}

LpEstimate lp_norm_monte_carlo(const Polynomial& f, double p, std::uint64_t samples,
                               std::uint64_t seed, bool parallel) {
  return monte_carlo_impl(kernels::EvalPlan::from(f), p, samples, seed, parallel);
}

LpEstimate lp_norm_monte_carlo(const TrigPolynomial& f, double p, std::uint64_t samples,
                               std::uint64_t seed, bool parallel) {
  return monte_carlo_impl(kernels::EvalPlan::from(f), p, samples, seed, parallel);
}

LpEstimate lp_norm_separable(const std::vector<Polynomial>& factors, double p,
                             int nodes_per_arc) {
  check_p(p);
  if (factors.empty())
    throw std::invalid_argument("lp_norm_separable: need at least one factor");
  const int d = factors.front().dimension();

  std::set<int> seen;
  std::vector<std::vector<int>> active_sets;
  for (const Polynomial& factor : factors) {
    if (factor.dimension() != d)
      throw std::invalid_argument("lp_norm_separable: factor dimension mismatch");
    std::vector<int> active;
    for (const auto& [n, c] : factor.terms()) {
      const MultiIndex e = factorize(n, d);
      for (int v = 0; v < d; ++v)
        if (e[v] > 0 && std::find(active.begin(), active.end(), v) == active.end())
          active.push_back(v);
    }
    for (const int v : active)
      if (!seen.insert(v).second)
        throw std::invalid_argument("lp_norm_separable: factors share variable z_" +
                                    std::to_string(v + 1));
    active_sets.push_back(std::move(active));
  }

  double value = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const UnivariateReduction red = reduce_factor(factors[i], active_sets[i]);
    if (red.coeffs.empty()) {
      value = 0.0;
      break;
    }
    const double mean = univariate_abs_pow_mean(red.coeffs, p, nodes_per_arc);
    value *= mean <= 0.0 ? 0.0 : std::pow(mean, 1.0 / p);
  }

  LpEstimate out;
  out.method = LpEstimate::Method::separable_exact;
  out.value = value;
  return out;
}

}  // namespace polyhankel
