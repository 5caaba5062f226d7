#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polyhankel/lp_norm.hpp"

using namespace polyhankel;

namespace {

constexpr double kFourOverPi = 4.0 / std::numbers::pi;

Polynomial pair_binomial(int d, int j) {
  return Polynomial::variable(d, 2 * j - 1) + Polynomial::variable(d, 2 * j);
}

Polynomial random_poly(std::mt19937_64& rng, int d, int max_exp, int terms) {
  std::uniform_int_distribution<int> e_dist(0, max_exp);
  std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
  Polynomial f(d);
  for (int t = 0; t < terms; ++t) {
    MultiIndex e(d, 0);
    for (int i = 0; i < d; ++i) e[i] = e_dist(rng);
    f.add_term(compose(e), {c_dist(rng), c_dist(rng)});
  }
  return f;
}

}  // namespace

TEST_SUITE("lp_norm") {

TEST_CASE("quadrature: L1 of z1+z2 on 512 nodes per dimension") {
  const Polynomial f = pair_binomial(2, 1);
  const LpEstimate est = lp_norm_quadrature(f, 1.0, 512);
  CHECK(est.method == LpEstimate::Method::tensor_quadrature);
  CHECK(std::abs(est.value - kFourOverPi) < 1e-5);
}

TEST_CASE("quadrature: constants and exact p=2") {
  const Polynomial c = Polynomial::constant(3, {3.0, -4.0});
  for (const double p : {1.0, 2.0, 3.5})
    CHECK(lp_norm_quadrature(c, p, 4).value == doctest::Approx(5.0).epsilon(1e-14));

  // |f|^2 has bandwidth 2, so 3 nodes per dimension integrate it exactly
  const Polynomial f = pair_binomial(2, 1);
  CHECK(std::abs(lp_norm_quadrature(f, 2.0, 3).value - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("quadrature with p=2 matches h2_norm once nodes exceed twice the bandwidth") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial f = random_poly(rng, 2, 3, 4);
    const int nodes = 2 * 3 + 2;
    CHECK(std::abs(lp_norm_quadrature(f, 2.0, nodes).value - h2_norm(f)) < 1e-10);
  }
}

TEST_CASE("quadrature: input validation and budget") {
  const Polynomial f = pair_binomial(4, 1);
  CHECK_THROWS_AS(lp_norm_quadrature(f, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm_quadrature(f, 0.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm_quadrature(f, 1.0, 200), BudgetExceeded);  // 200^4 > 1e8
  try {
    lp_norm_quadrature(f, 1.0, 200);
  } catch (const BudgetExceeded& e) {
    CHECK(e.budget() == kDefaultQuadBudget);
    CHECK(std::string(e.what()).find("monte-carlo") != std::string::npos);
  }
  // zero polynomial has zero norm at any p
  CHECK(lp_norm_quadrature(Polynomial(2), 1.0, 8).value == 0.0);
}

TEST_CASE("separable: the pair product reaches (4/pi)^(d/2) at machine precision") {
  for (int d = 2; d <= 12; d += 2) {
    std::vector<Polynomial> factors;
    for (int j = 1; j <= d / 2; ++j) factors.push_back(pair_binomial(d, j));
    const LpEstimate est = lp_norm_separable(factors, 1.0);
    CHECK(est.method == LpEstimate::Method::separable_exact);
    CHECK(est.error_bound == 0.0);
    CHECK(std::abs(est.value - std::pow(kFourOverPi, d / 2.0)) < 1e-12);
  }
}

TEST_CASE("separable: single factors") {
  CHECK(lp_norm_separable({Polynomial::variable(2, 1)}, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm_separable({Polynomial::variable(2, 1)}, 3.0).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm_separable({pair_binomial(2, 1)}, 1.0).value ==
        doctest::Approx(kFourOverPi).epsilon(1e-14));
  CHECK(lp_norm_separable({Polynomial::constant(2, {0.0, -2.5})}, 1.0).value ==
        doctest::Approx(2.5).epsilon(1e-14));
  CHECK(lp_norm_separable({Polynomial(2)}, 1.0).value == 0.0);
}

TEST_CASE("separable: cross-checks against tensor quadrature") {
  // univariate with three terms: exercises the root-splitting panels
  Polynomial univ(1);
  univ.add_term(1, 1.0);
  univ.add_term(2, 1.0);   // z
  univ.add_term(4, 1.0);   // z^2
  const double sep = lp_norm_separable({univ}, 1.0).value;
  const double quad = lp_norm_quadrature(univ, 1.0, 4096).value;
  CHECK(std::abs(sep - quad) < 1e-5);

  // binomial with unequal moduli: no zero on the circle, smooth integrand
  Polynomial skew(2);
  skew.add_term(2, 2.0);
  skew.add_term(3, 1.0);
  CHECK(std::abs(lp_norm_separable({skew}, 1.0).value -
                 lp_norm_quadrature(skew, 1.0, 512).value) < 1e-6);

  // p = 2 agrees with the coefficient route
  CHECK(std::abs(lp_norm_separable({skew}, 2.0).value - h2_norm(skew)) < 1e-12);
}

TEST_CASE("separable: structure violations") {
  const Polynomial shared_a = pair_binomial(4, 1);
  Polynomial shared_b(4);
  shared_b.add_term(2, 1.0);  // z1 again
  shared_b.add_term(5, 1.0);
  CHECK_THROWS_AS(lp_norm_separable({shared_a, shared_b}, 1.0), std::invalid_argument);

  // three terms across two variables has no univariate reduction
  Polynomial wide(2);
  wide.add_term(1, 1.0);
  wide.add_term(2, 1.0);
  wide.add_term(3, 1.0);
  CHECK_THROWS_AS(lp_norm_separable({wide}, 1.0), std::invalid_argument);

  CHECK_THROWS_AS(lp_norm_separable({}, 1.0), std::invalid_argument);
}

TEST_CASE("monte carlo: seeded reproducibility and 3-sigma agreement") {
  const Polynomial f = pair_binomial(2, 1);
  const LpEstimate a = lp_norm_monte_carlo(f, 1.0, 1000000, 0);
  const LpEstimate b = lp_norm_monte_carlo(f, 1.0, 1000000, 0);
  CHECK(a.value == b.value);
  CHECK(a.error_bound == b.error_bound);
  CHECK(a.error_bound > 0.0);
  CHECK(std::abs(a.value - kFourOverPi) < 3.0 * a.error_bound);

  const LpEstimate serial = lp_norm_monte_carlo(f, 1.0, 1000000, 0, false);
  CHECK(serial.value == a.value);

  const Polynomial c = Polynomial::constant(2, {0.6, -0.8});
  const LpEstimate ce = lp_norm_monte_carlo(c, 1.0, 1000, 1);
  CHECK(ce.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ce.error_bound < 1e-12);

  CHECK_THROWS_AS(lp_norm_monte_carlo(f, 1.0, 1, 0), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with quadrature across seeds") {
  const Polynomial f = pair_binomial(2, 1);
  const double quad = lp_norm_quadrature(f, 1.0, 512).value;
  for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const LpEstimate mc = lp_norm_monte_carlo(f, 1.0, 200000, seed);
    CHECK(std::abs(mc.value - quad) < 3.0 * mc.error_bound + 1e-4);
  }
}

TEST_CASE("L1 never exceeds L2 (probability measure)") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Polynomial f = random_poly(rng, 2, 2, 4);
    const double l1 = lp_norm_quadrature(f, 1.0, 128).value;
    CHECK(l1 <= h2_norm(f) + 1e-6);
  }
}

}  // TEST_SUITE
