#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "polyhankel/monomial.hpp"

using namespace polyhankel;

namespace {

// independent sieve oracle, kept separate from the library's cache
std::vector<std::uint64_t> sieve_oracle(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

}  // namespace

TEST_SUITE("monomial") {

TEST_CASE("nth_prime basics and sieve oracle") {
  CHECK(nth_prime(1) == 2);
  CHECK(nth_prime(2) == 3);
  CHECK(nth_prime(6) == 13);

  const auto oracle = sieve_oracle(600);
  for (std::size_t k = 1; k <= 100; ++k) CHECK(nth_prime(k) == oracle[k - 1]);

  CHECK_THROWS_AS(nth_prime(0), std::invalid_argument);
  CHECK_THROWS_AS(nth_prime(kNthPrimeCap + 1), std::overflow_error);
}

TEST_CASE("factorize examples and errors") {
  CHECK(factorize(1, 2) == MultiIndex{0, 0});
  CHECK(factorize(12, 2) == MultiIndex{2, 1});
  CHECK(factorize(45, 3) == MultiIndex{0, 2, 1});

  CHECK_THROWS_AS(factorize(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(factorize(5, 2), std::invalid_argument);   // 5 = p_3
  CHECK_THROWS_AS(factorize(14, 3), std::invalid_argument);  // 7 = p_4
}

TEST_CASE("compose examples and errors") {
  CHECK(compose({0, 0}) == 1);
  CHECK(compose({2, 1}) == 12);
  CHECK(compose({1, 0, 1}) == 10);
  CHECK(compose({}) == 1);

  CHECK_THROWS_AS(compose({-1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(compose({70}), std::overflow_error);  // 2^70
}

TEST_CASE("compose and factorize are mutually inverse") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<int> d_dist(1, 8);
  std::uniform_int_distribution<int> e_dist(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = d_dist(rng);
    MultiIndex e(d, 0);
    for (int i = 0; i < d; ++i) e[i] = e_dist(rng);  // (2*3*...*19)^2 still fits
    const MonomialId n = compose(e);
    CHECK(factorize(n, d) == e);
    CHECK(compose(factorize(n, d)) == n);
  }
}

TEST_CASE("big_omega examples and additivity") {
  CHECK(big_omega(1) == 0);
  CHECK(big_omega(12) == 3);
  CHECK(big_omega(30) == 3);
  CHECK_THROWS_AS(big_omega(0), std::invalid_argument);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d_dist(1, 6);
  std::uniform_int_distribution<int> e_dist(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = d_dist(rng);
    MultiIndex ea(d, 0), eb(d, 0);
    for (int i = 0; i < d; ++i) {
      ea[i] = e_dist(rng);
      eb[i] = e_dist(rng);
    }
    const MonomialId m = compose(ea);
    const MonomialId n = compose(eb);
    CHECK(big_omega(checked_mul(m, n)) == big_omega(m) + big_omega(n));
  }
}

TEST_CASE("pair_product_set small dimensions") {
  CHECK(pair_product_set(2).members == std::vector<MonomialId>{2, 3});

  // brute-force oracle: expand {2,3} x {5,7}
  std::vector<MonomialId> expected4;
  for (const MonomialId p : {2, 3})
    for (const MonomialId q : {5, 7}) expected4.push_back(p * q);
  std::sort(expected4.begin(), expected4.end());
  CHECK(pair_product_set(4).members == expected4);
  CHECK(pair_product_set(4).members == std::vector<MonomialId>{10, 14, 15, 21});

  CHECK(pair_product_set(6).members.size() == 8);
}

TEST_CASE("pair_product_set member structure") {
  for (const int d : {2, 4, 6, 8, 10, 12}) {
    const PairProductSet I = pair_product_set(d);
    CHECK(I.members.size() == (std::size_t{1} << (d / 2)));
    CHECK(std::is_sorted(I.members.begin(), I.members.end()));
    for (const MonomialId m : I.members) {
      CHECK(big_omega(m) == d / 2);
      const MultiIndex e = factorize(m, d);
      for (const int ei : e) CHECK(ei <= 1);  // squarefree
    }
  }
}

TEST_CASE("pair_product_set rejects odd or tiny dimensions") {
  CHECK_THROWS_AS(pair_product_set(3), std::invalid_argument);
  CHECK_THROWS_AS(pair_product_set(1), std::invalid_argument);
  CHECK_THROWS_AS(pair_product_set(0), std::invalid_argument);
  CHECK_THROWS_AS(pair_product_set(-2), std::invalid_argument);
}

TEST_CASE("divisor_closure examples and brute-force oracle") {
  CHECK(divisor_closure(pair_product_set(2)) == std::vector<MonomialId>{1, 2, 3});

  const PairProductSet I4 = pair_product_set(4);
  std::set<MonomialId> oracle;
  for (const MonomialId m : I4.members)
    for (MonomialId div = 1; div <= m; ++div)
      if (m % div == 0) oracle.insert(div);
  const std::vector<MonomialId> closure4 = divisor_closure(I4);
  CHECK(closure4 == std::vector<MonomialId>(oracle.begin(), oracle.end()));
  CHECK(closure4 == std::vector<MonomialId>{1, 2, 3, 5, 7, 10, 14, 15, 21});

  CHECK(divisor_closure(pair_product_set(6)).size() == 27);
}

TEST_CASE("divisor_closure cardinality is 3^(d/2)") {
  std::uint64_t expected = 3;
  for (int d = 2; d <= 12; d += 2) {
    CHECK(divisor_closure(pair_product_set(d)).size() == expected);
    expected *= 3;
  }
}

TEST_CASE("row count property: products landing in I") {
  for (const int d : {2, 4, 6}) {
    const PairProductSet I = pair_product_set(d);
    const std::vector<MonomialId> closure = divisor_closure(I);
    const std::set<MonomialId> members(I.members.begin(), I.members.end());
    for (const MonomialId j : closure) {
      std::uint64_t count = 0;
      for (const MonomialId k : closure)
        if (members.contains(j * k)) ++count;
      CHECK(count == (std::uint64_t{1} << (d / 2 - big_omega(j))));
    }
  }
}

TEST_CASE("overflow is rejected rather than wrapped") {
  // members of the pair-product set leave 64 bits around d = 26
  CHECK_THROWS_AS(pair_product_set(26), std::overflow_error);
  CHECK_THROWS_AS(checked_mul(std::uint64_t{1} << 40, std::uint64_t{1} << 40),
                  std::overflow_error);
  CHECK(checked_mul(std::uint64_t{1} << 31, std::uint64_t{1} << 31) ==
        std::uint64_t{1} << 62);
}

}  // TEST_SUITE
