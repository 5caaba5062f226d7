#pragma once

#include <cstdint>
#include <vector>

namespace polyhankel {

// Monomials on the polydisc are indexed multiplicatively:
//
//   z_1^{e_1} ... z_d^{e_d}  <->  p_1^{e_1} ... p_d^{e_d}
//
// with p_k the k-th prime.  The primes do no number-theoretic work here;
// they only give each exponent vector a unique, product-compatible integer
// key (multiplying monomials multiplies their ids).
using MonomialId = std::uint64_t;

// Exponent vector; entry i is the exponent of z_{i+1}.
using MultiIndex = std::vector<int>;

// Indices above this are rejected by nth_prime so the sieve stays small and
// results fit comfortably in 64 bits.
inline constexpr std::size_t kNthPrimeCap = 1000000;

// k-th prime, 1-based: nth_prime(1) == 2.  Backed by a process-wide cache
// (deterministic sieve) that grows on demand; safe for concurrent callers.
std::uint64_t nth_prime(std::size_t k);

// First `count` primes, as one snapshot of the cache.
std::vector<std::uint64_t> first_primes(std::size_t count);

// a*b, throwing std::overflow_error when the product leaves 64 bits.
MonomialId checked_mul(MonomialId a, MonomialId b);

// Exponent vector of n with respect to the first d primes.  Throws
// std::invalid_argument if n has a prime factor beyond p_d (the id is not
// valid for dimension d).
MultiIndex factorize(MonomialId n, int d);

// Inverse of factorize: prod p_i^{e_i}.  Throws std::invalid_argument on a
// negative exponent and std::overflow_error if the product leaves 64 bits.
MonomialId compose(const MultiIndex& exponents);

// Number of prime factors of n counted with multiplicity.  Completely
// additive: big_omega(m*n) == big_omega(m) + big_omega(n).
int big_omega(MonomialId n);

// The 2^{d/2} squarefree ids formed by picking one prime out of each
// consecutive pair {p_{2j-1}, p_{2j}}, j = 1..d/2.  Defined for even d >= 2
// only; odd dimensions are rejected.
struct PairProductSet {
  int d = 0;                        // ambient (even) dimension
  std::vector<MonomialId> members;  // sorted ascending

  bool contains(MonomialId n) const;
};

PairProductSet pair_product_set(int d);

// Every divisor of every member of I, deduplicated and sorted ascending.
// Each pair contributes a factor from {1, p_{2j-1}, p_{2j}}, so the closure
// has exactly 3^{d/2} elements.
std::vector<MonomialId> divisor_closure(const PairProductSet& I);

}  // namespace polyhankel
