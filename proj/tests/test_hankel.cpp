#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "polyhankel/certificate.hpp"
#include "polyhankel/hankel.hpp"
#include "polyhankel/serialize.hpp"

using namespace polyhankel;

namespace {

// the d=2 construction symbol z1 + z2 on J = {1, 2, 3}
HankelMatrix pair_matrix_d2() {
  Polynomial psi(2);
  psi.add_term(2, 1.0);
  psi.add_term(3, 1.0);
  return build_matrix(psi, {1, 2, 3});
}

// random entrywise-nonnegative multiplicative Hankel instance
struct RandomInstance {
  Polynomial symbol;
  std::vector<MonomialId> index_set;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d_dist(1, 2);
  const int d = 2 * d_dist(rng);
  const std::vector<MonomialId> closure = divisor_closure(pair_product_set(d));
  std::uniform_real_distribution<double> c_dist(0.0, 1.0);
  std::uniform_int_distribution<int> keep(0, 2);
  Polynomial symbol(d);
  for (const MonomialId j : closure)
    for (const MonomialId k : closure)
      if (keep(rng) == 0) symbol.add_term(checked_mul(j, k), c_dist(rng));
  return {std::move(symbol), closure};
}

}  // namespace

TEST_SUITE("hankel") {

TEST_CASE("build_matrix: the d=2 construction block") {
  const HankelMatrix m = pair_matrix_d2();
  REQUIRE(m.size() == 3);
  const double expected[3][3] = {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(m.entry(r, c) == Coefficient{expected[r][c]});
  CHECK(m.is_real());
  CHECK(m.is_nonnegative());
  CHECK(m.nonzeros() == 4);
}

TEST_CASE("build_matrix: degenerate cases") {
  const HankelMatrix one = build_matrix(Polynomial::constant(1, 1.0), {1});
  CHECK(one.size() == 1);
  CHECK(one.entry(0, 0) == Coefficient{1.0});

  const HankelMatrix zero = build_matrix(Polynomial(2), {1, 2, 3});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(zero.entry(r, c) == Coefficient{0.0});
  const NormResult norm = operator_norm(zero);
  CHECK(norm.value == 0.0);
  CHECK(norm.method == NormResult::Method::exact_svd);

  CHECK_THROWS_AS(build_matrix(Polynomial(2), {}), std::invalid_argument);
}

TEST_CASE("matrix export lists the index set first") {
  const HankelMatrix m = pair_matrix_d2();
  const nlohmann::ordered_json j = matrix_to_json(m);
  CHECK(j["index_set"] == nlohmann::ordered_json::array({1, 2, 3}));
  CHECK(j["rows"][0] == nlohmann::ordered_json::array({0, 1, 1}));
  CHECK(j["rows"][2] == nlohmann::ordered_json::array({1, 0, 0}));

  const std::string csv = matrix_to_csv(m);
  CHECK(csv == "1,2,3\n0,1,1\n1,0,0\n1,0,0\n");

  Polynomial complex_symbol(1);
  complex_symbol.add_term(2, {1.0, -2.0});
  const std::string ccsv = matrix_to_csv(build_matrix(complex_symbol, {1, 2}));
  CHECK(ccsv.find("1-2i") != std::string::npos);
}

TEST_CASE("entries depend only on the index product") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomInstance inst = random_instance(rng);
    const HankelMatrix m = build_matrix(inst.symbol, inst.index_set);
    const int n = m.size();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int r2 = 0; r2 < n; ++r2)
          for (int c2 = 0; c2 < n; ++c2)
            if (inst.index_set[r] * inst.index_set[c] ==
                inst.index_set[r2] * inst.index_set[c2])
              CHECK(m.entry(r, c) == m.entry(r2, c2));
  }
}

TEST_CASE("apply_functional examples") {
  const Construction c2 = build_construction(2);
  CHECK(apply_functional(c2.psi, c2.f) == Coefficient{2.0});

  Polynomial disjoint(2);
  disjoint.add_term(4, 5.0);  // z1^2, absent from psi
  CHECK(apply_functional(c2.psi, disjoint) == Coefficient{0.0});

  const Construction c6 = build_construction(6);
  CHECK(apply_functional(c6.psi, c6.f) == Coefficient{8.0});
}

TEST_CASE("apply_functional_integer: exact lane") {
  for (int d = 2; d <= 12; d += 2) {
    const Construction c = build_construction(d);
    CHECK(apply_functional_integer(c.psi, c.f) == (1ll << (d / 2)));
  }
  Polynomial fractional(2);
  fractional.add_term(2, 0.5);
  const Construction c2 = build_construction(2);
  CHECK_THROWS_AS(apply_functional_integer(c2.psi, fractional), std::invalid_argument);
}

TEST_CASE("bilinear: examples and agreement with the matrix route") {
  const Construction c2 = build_construction(2);
  CHECK(bilinear(c2.psi, c2.f, Polynomial::constant(2, 1.0)) == Coefficient{2.0});
  CHECK(bilinear(c2.psi, Polynomial(2), c2.f) == Coefficient{0.0});

  const Construction c4 = build_construction(4);
  CHECK(bilinear(c4.psi, c4.f, Polynomial::constant(4, 1.0)) == Coefficient{4.0});

  // independent route: a^T M b over an index set covering both supports
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<MonomialId>& J = c4.index_set;
    Polynomial f(4), g(4);
    for (const MonomialId j : J) {
      f.add_term(j, {c_dist(rng), c_dist(rng)});
      g.add_term(j, {c_dist(rng), c_dist(rng)});
    }
    const HankelMatrix m = build_matrix(c4.psi, J);
    Coefficient matrix_route = 0.0;
    for (int r = 0; r < m.size(); ++r)
      for (int c = 0; c < m.size(); ++c)
        matrix_route += f.coeff(J[static_cast<std::size_t>(r)]) *
                        g.coeff(J[static_cast<std::size_t>(c)]) * m.entry(r, c);
    CHECK(std::abs(bilinear(c4.psi, f, g) - matrix_route) < 1e-12);
    CHECK(bilinear(c4.psi, f, g) == apply_functional(c4.psi, f * g));
  }
}

TEST_CASE("helson_weights: values and domain check") {
  const std::vector<MonomialId> closure2 = divisor_closure(pair_product_set(2));
  const SchurWeights w2 = helson_weights(2, closure2);
  CHECK(w2.values.at(1) == 1.0);
  CHECK(w2.values.at(2) == doctest::Approx(std::exp2(-0.5)).epsilon(1e-16));
  REQUIRE(w2.half_log2.has_value());
  CHECK(w2.half_log2->at(2) == -1);

  const std::vector<MonomialId> closure4 = divisor_closure(pair_product_set(4));
  const SchurWeights w4 = helson_weights(4, closure4);
  CHECK(w4.values.at(10) == doctest::Approx(0.5).epsilon(1e-16));  // Omega = 2

  CHECK_THROWS_AS(helson_weights(2, {4}), std::invalid_argument);  // 4 not in closure
}

TEST_CASE("schur_bound: examples") {
  const HankelMatrix m2 = pair_matrix_d2();
  SchurWeights w;
  w.values = {{1, 1.0}, {2, std::exp2(-0.5)}, {3, std::exp2(-0.5)}};
  CHECK(schur_bound(m2, w) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const HankelMatrix one = build_matrix(Polynomial::constant(1, 1.0), {1});
  SchurWeights w1;
  w1.values = {{1, 1.0}};
  CHECK(schur_bound(one, w1) == 1.0);

  const Construction c4 = build_construction(4);
  const HankelMatrix m4 = build_matrix(c4.psi, c4.index_set);
  CHECK(schur_bound(m4, c4.weights) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("schur_bound: rejects unsupported matrices and weights") {
  Polynomial negative(2);
  negative.add_term(2, -1.0);
  CHECK_THROWS_AS(schur_bound(build_matrix(negative, {1, 2}), SchurWeights{{{1, 1.0}, {2, 1.0}}, {}}),
                  std::invalid_argument);

  Polynomial complex_symbol(2);
  complex_symbol.add_term(2, {0.0, 1.0});
  CHECK_THROWS_AS(schur_bound(build_matrix(complex_symbol, {1, 2}),
                              SchurWeights{{{1, 1.0}, {2, 1.0}}, {}}),
                  std::invalid_argument);

  SchurWeights missing;
  missing.values = {{1, 1.0}};
  CHECK_THROWS_AS(schur_bound(pair_matrix_d2(), missing), std::invalid_argument);
  SchurWeights nonpositive;
  nonpositive.values = {{1, 1.0}, {2, 0.0}, {3, 1.0}};
  CHECK_THROWS_AS(schur_bound(pair_matrix_d2(), nonpositive), std::invalid_argument);
}

TEST_CASE("row_sum_identity_check: exact integer verification") {
  const RowIdentityReport r2 = row_sum_identity_check(2);
  CHECK(r2.ok);
  REQUIRE(r2.rows.size() == 3);
  CHECK(r2.rows[0].count == 2);  // j = 1
  CHECK(r2.rows[1].count == 1);  // j = 2
  CHECK(r2.rows[2].count == 1);  // j = 3

  for (int d = 2; d <= 12; d += 2) {
    const RowIdentityReport report = row_sum_identity_check(d);
    CHECK(report.ok);
    for (const RowIdentityRow& row : report.rows) {
      CHECK(row.count == row.expected);
      CHECK(row.count == (std::uint64_t{1} << (d / 2 - row.omega)));
      CHECK(row.complement_uniform);
    }
  }
}

TEST_CASE("schur_bound_exact: power-of-sqrt2 lane") {
  for (int d = 2; d <= 12; d += 2) {
    const ExactDyadic exact = schur_bound_exact(d);
    CHECK(exact.half_log2 == d / 2);
    CHECK(exact.value == doctest::Approx(std::exp2(d / 4.0)).epsilon(1e-15));
  }
}

TEST_CASE("operator_norm: construction values") {
  CHECK(std::abs(operator_norm(pair_matrix_d2()).value - std::sqrt(2.0)) < 1e-10);

  Polynomial rho(1);
  rho.add_term(1, {3.0, -4.0});
  CHECK(std::abs(operator_norm(build_matrix(rho, {1})).value - 5.0) < 1e-12);

  const Construction c8 = build_construction(8);
  const HankelMatrix m8 = build_matrix(c8.psi, c8.index_set);
  CHECK(m8.size() == 81);
  CHECK(std::abs(operator_norm(m8).value - 4.0) < 1e-10);
}

TEST_CASE("power iteration agrees with the dense SVD") {
  const Construction c4 = build_construction(4);
  // force sparse storage with a tiny dense cutoff to exercise that path too
  const HankelMatrix dense = build_matrix(c4.psi, c4.index_set);
  const HankelMatrix sparse = build_matrix(c4.psi, c4.index_set, 1);
  CHECK(dense.is_dense());
  CHECK_FALSE(sparse.is_dense());

  const NormResult svd = operator_norm(dense);
  const NormResult power_dense = power_iteration_norm(dense);
  const NormResult power_sparse = operator_norm(sparse);
  CHECK(power_sparse.method == NormResult::Method::power_iteration);
  CHECK(std::abs(svd.value - power_dense.value) < 1e-9);
  CHECK(std::abs(svd.value - power_sparse.value) < 1e-9);
  CHECK(power_sparse.residual < 1e-12);
  CHECK(power_sparse.iterations >= 2);

  const Construction c12 = build_construction(12);
  const HankelMatrix m12 = build_matrix(c12.psi, c12.index_set);
  CHECK_FALSE(m12.is_dense());  // 729 > 512
  CHECK(std::abs(operator_norm(m12).value - 8.0) < 1e-9);
}

TEST_CASE("power iteration reports non-convergence with its best estimate") {
  const Construction c4 = build_construction(4);
  const HankelMatrix m = build_matrix(c4.psi, c4.index_set, 1);
  // a single iteration can never satisfy the change test, so the cap trips
  CHECK_THROWS_AS(power_iteration_norm(m, 1e-30, 1), ConvergenceError);
  try {
    power_iteration_norm(m, 1e-30, 1);
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.estimate() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(e.residual() >= 0.0);
  }
}

TEST_CASE("tensor_norm_closed_form") {
  CHECK(std::abs(tensor_norm_closed_form(2) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(tensor_norm_closed_form(4) - 2.0) < 1e-12);
  CHECK(std::abs(tensor_norm_closed_form(10) - std::exp2(2.5)) < 1e-12);
  CHECK_THROWS_AS(tensor_norm_closed_form(3), std::invalid_argument);
}

TEST_CASE("schur bound dominates the operator norm on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w_dist(0.1, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomInstance inst = random_instance(rng);
    const HankelMatrix m = build_matrix(inst.symbol, inst.index_set);
    SchurWeights weights;
    for (const MonomialId j : inst.index_set) weights.values[j] = w_dist(rng);
    CHECK(schur_bound(m, weights) >= operator_norm(m).value - 1e-9);
  }
}

TEST_CASE("bilinear form obeys the Cauchy-Schwarz style bound") {
  std::mt19937_64 rng(4096);
  std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomInstance inst = random_instance(rng);
    const HankelMatrix m = build_matrix(inst.symbol, inst.index_set);
    Polynomial f(inst.symbol.dimension()), g(inst.symbol.dimension());
    for (const MonomialId j : inst.index_set) {
      f.add_term(j, {c_dist(rng), c_dist(rng)});
      g.add_term(j, {c_dist(rng), c_dist(rng)});
    }
    const double bound = operator_norm(m).value * h2_norm(f) * h2_norm(g);
    CHECK(std::abs(bilinear(inst.symbol, f, g)) <= bound + 1e-9);
  }
}

TEST_CASE("equality case: the construction is extremal") {
  for (int d = 2; d <= 10; d += 2) {
    const Construction c = build_construction(d);
    const HankelMatrix m = build_matrix(c.psi, c.index_set);
    const double lhs = std::abs(apply_functional(c.psi, c.f));
    const double rhs = operator_norm(m).value * h2_norm(c.f);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

}  // TEST_SUITE
