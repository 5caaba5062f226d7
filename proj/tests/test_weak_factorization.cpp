#include <doctest.h>

#include <cmath>
#include <random>

#include "polyhankel/certificate.hpp"
#include "polyhankel/lp_norm.hpp"
#include "polyhankel/weak_factorization.hpp"

using namespace polyhankel;

namespace {

double max_coeff_error(const Polynomial& a, const Polynomial& b) {
  const Polynomial diff = a - b;
  double err = 0.0;
  for (const auto& [n, c] : diff.terms()) err = std::max(err, std::abs(c));
  return err;
}

}  // namespace

TEST_SUITE("weak_factorization") {

TEST_CASE("wf_cost examples") {
  const Polynomial one = Polynomial::constant(2, 1.0);
  const Polynomial z1 = Polynomial::variable(2, 1);
  const Polynomial z2 = Polynomial::variable(2, 2);

  CHECK(wf_cost({2, {{z1, one}}}) == 1.0);
  CHECK(wf_cost({2, {{z1 + z2, one}}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(wf_cost({2, {{z1, z2}, {z2, z1}}}) == 2.0);
}

TEST_CASE("default_grid examples") {
  const Polynomial f2 = Polynomial::variable(2, 1) + Polynomial::variable(2, 2);
  const FactorizationGrid g2 = default_grid(f2);
  CHECK(g2.rows == std::vector<MonomialId>{1, 2, 3});
  CHECK(g2.cols == g2.rows);

  Polynomial z1z2(2);
  z1z2.add_term(6, 1.0);
  CHECK(default_grid(z1z2).rows == std::vector<MonomialId>{1, 2, 3, 6});

  const Construction c4 = build_construction(4);
  const FactorizationGrid g4 = default_grid(c4.f);
  CHECK(g4.rows.size() == 9);
  CHECK(g4.rows == c4.index_set);

  CHECK_THROWS_AS(default_grid(Polynomial(2)), std::invalid_argument);
}

TEST_CASE("primal solve: single monomial forces rank one") {
  const Polynomial f = Polynomial::variable(2, 1);
  FactorizationGrid grid;
  grid.rows = {1, 2};
  grid.cols = {1, 2};
  const WfSolveOutput out = wf_norm_primal(f, grid, 1e-8);
  CHECK(std::abs(out.result.upper - 1.0) < 1e-6);
  CHECK(out.result.lower <= out.result.upper + 1e-6);
  CHECK(max_coeff_error(reconstruct(out.factorization), f) < 1e-8);
}

TEST_CASE("primal solve: the d=2 construction reaches sqrt 2") {
  const Construction c2 = build_construction(2);
  const WfSolveOutput out = wf_norm_primal(c2.f, default_grid(c2.f), 1e-7);
  CHECK(std::abs(out.result.upper - std::sqrt(2.0)) < 1e-4);
  CHECK(std::abs(out.result.lower - std::sqrt(2.0)) < 1e-4);
  CHECK(out.result.lower <= out.result.upper + 1e-7);
  CHECK(max_coeff_error(reconstruct(out.factorization), c2.f) < 1e-8);
  CHECK(wf_cost(out.factorization) == doctest::Approx(out.result.upper).epsilon(1e-6));
}

TEST_CASE("primal solve: the d=4 construction reaches 2") {
  const Construction c4 = build_construction(4);
  const WfSolveOutput out = wf_norm_primal(c4.f, default_grid(c4.f), 1e-7);
  CHECK(std::abs(out.result.upper - 2.0) < 1e-3);
  CHECK(max_coeff_error(reconstruct(out.factorization), c4.f) < 1e-8);
}

TEST_CASE("primal solve: infeasible grids and degenerate input") {
  Polynomial f(2);
  f.add_term(6, 1.0);  // z1 z2
  FactorizationGrid grid;
  grid.rows = {1, 2};
  grid.cols = {1, 2};  // products {1, 2, 4}: 6 unreachable
  CHECK_THROWS_AS(wf_norm_primal(f, grid, 1e-6), std::invalid_argument);

  const WfSolveOutput zero = wf_norm_primal(Polynomial(2), grid, 1e-6);
  CHECK(zero.result.upper == 0.0);
  CHECK(zero.factorization.pairs.empty());

  CHECK_THROWS_AS(wf_norm_primal(f, grid, 0.0), std::invalid_argument);
}

TEST_CASE("primal solve: iteration cap raises with residuals attached") {
  const Construction c2 = build_construction(2);
  CHECK_THROWS_AS(wf_norm_primal(c2.f, default_grid(c2.f), 1e-12, 1), ConvergenceError);
  try {
    wf_norm_primal(c2.f, default_grid(c2.f), 1e-12, 1);
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("grid monotonicity: enlarging the grid never increases the value") {
  const Polynomial f = Polynomial::variable(2, 1) + Polynomial::variable(2, 2);
  FactorizationGrid small = default_grid(f);
  FactorizationGrid large = small;
  for (const MonomialId extra : {4, 6, 9, 12}) {
    large.rows.push_back(extra);
    large.cols.push_back(extra);
  }
  const double upper_small = wf_norm_primal(f, small, 1e-8).result.upper;
  const double upper_large = wf_norm_primal(f, large, 1e-8).result.upper;
  CHECK(upper_large <= upper_small + 1e-6);
}

TEST_CASE("primal value sits between the L1 norm and the trivial factorization") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial f(2);
    f.add_term(1, {c_dist(rng), 0.0});
    f.add_term(2, {c_dist(rng), c_dist(rng)});
    f.add_term(3, {c_dist(rng), c_dist(rng)});
    f.add_term(6, {c_dist(rng), c_dist(rng)});
    if (f.is_zero()) continue;
    const WfSolveOutput out = wf_norm_primal(f, default_grid(f), 1e-8);
    // trivial factorization f * 1 costs ||f||_2
    CHECK(out.result.upper <= h2_norm(f) + 1e-6);
    // weak norm dominates L1
    const double l1 = lp_norm_quadrature(f, 1.0, 128).value;
    CHECK(out.result.upper >= l1 - 1e-4);
    CHECK(out.result.lower <= out.result.upper + 1e-6);
  }
}

TEST_CASE("wf_norm_dual examples") {
  const Construction c2 = build_construction(2);
  const FactorizationGrid g2 = default_grid(c2.f);
  CHECK(wf_norm_dual(c2.f, c2.psi, g2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // a symbol orthogonal to f (but alive on the grid) certifies nothing
  Polynomial far(2);
  far.add_term(4, 1.0);  // z1^2: disjoint from f's support {2, 3}
  CHECK(wf_norm_dual(c2.f, far, g2) == 0.0);

  const Construction c6 = build_construction(6);
  CHECK(wf_norm_dual(c6.f, c6.psi, default_grid(c6.f)) ==
        doctest::Approx(std::exp2(1.5)).epsilon(1e-9));

  CHECK_THROWS_AS(wf_norm_dual(c2.f, Polynomial(2), g2), std::invalid_argument);
}

TEST_CASE("dual lower bound never exceeds the primal value") {
  for (const int d : {2, 4}) {
    const Construction c = build_construction(d);
    const FactorizationGrid grid = default_grid(c.f);
    const double lower = wf_norm_dual(c.f, c.psi, grid);
    const double upper = wf_norm_primal(c.f, grid, 1e-8).result.upper;
    CHECK(lower <= upper + 1e-6);
  }
}

}  // TEST_SUITE
