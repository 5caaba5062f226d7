#include "polyhankel/monomial.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>

namespace polyhankel {

namespace {

std::mutex g_prime_mutex;
std::vector<std::uint64_t> g_primes;

// Rebuilds the cache so it holds at least `count` primes.  Uses the bound
// p_k < k(ln k + ln ln k) for k >= 6 to size the sieve.
void extend_primes_locked(std::size_t count) {
  if (g_primes.size() >= count) return;
  const std::size_t k = std::max<std::size_t>(count, 16);
  const double kk = static_cast<double>(k);
  const std::size_t limit =
      static_cast<std::size_t>(kk * (std::log(kk) + std::log(std::log(kk)))) + 16;
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  primes.reserve(count);
  for (std::size_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  g_primes.swap(primes);
}

}  // namespace

std::uint64_t nth_prime(std::size_t k) {
  if (k == 0) throw std::invalid_argument("nth_prime: index is 1-based");
  if (k > kNthPrimeCap)
    throw std::overflow_error("nth_prime: index " + std::to_string(k) +
                              " above supported cap " + std::to_string(kNthPrimeCap));
  std::lock_guard<std::mutex> lock(g_prime_mutex);
  extend_primes_locked(k);
  return g_primes[k - 1];
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  if (count > kNthPrimeCap)
    throw std::overflow_error("first_primes: count above supported cap");
  std::lock_guard<std::mutex> lock(g_prime_mutex);
  extend_primes_locked(count);
  return {g_primes.begin(), g_primes.begin() + count};
}

MonomialId checked_mul(MonomialId a, MonomialId b) {
  MonomialId r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("monomial id product overflows 64 bits");
  return r;
}

MultiIndex factorize(MonomialId n, int d) {
  if (n == 0) throw std::invalid_argument("factorize: id must be positive");
  if (d < 1) throw std::invalid_argument("factorize: dimension must be >= 1");
  const auto primes = first_primes(static_cast<std::size_t>(d));
  MultiIndex exponents(d, 0);
  for (int i = 0; i < d && n > 1; ++i) {
    while (n % primes[i] == 0) {
      n /= primes[i];
      ++exponents[i];
    }
  }
  if (n != 1)
    throw std::invalid_argument("factorize: id has a prime factor beyond the first " +
                                std::to_string(d) + " primes");
  return exponents;
}

MonomialId compose(const MultiIndex& exponents) {
  const auto primes = first_primes(exponents.size());
  MonomialId n = 1;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0)
      throw std::invalid_argument("compose: exponents must be nonnegative");
    for (int e = 0; e < exponents[i]; ++e) n = checked_mul(n, primes[i]);
  }
  return n;
}

int big_omega(MonomialId n) {
  if (n == 0) throw std::invalid_argument("big_omega: id must be positive");
  std::size_t have = 64;
  auto primes = first_primes(have);
  int count = 0;
  std::size_t k = 0;
  while (n > 1) {
    if (k == primes.size()) {
      if (have >= kNthPrimeCap)
        throw std::invalid_argument("big_omega: value outside supported sieve range");
      have = std::min(have * 4, kNthPrimeCap);
      primes = first_primes(have);
    }
    const std::uint64_t p = primes[k];
    if (p * p > n) {  // leftover cofactor is prime
      ++count;
      break;
    }
    while (n % p == 0) {
      n /= p;
      ++count;
    }
    ++k;
  }
  return count;
}

bool PairProductSet::contains(MonomialId n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

PairProductSet pair_product_set(int d) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("pair_product_set: dimension must be even and >= 2, got " +
                                std::to_string(d));
  const int pairs = d / 2;
  if (pairs >= 63) throw std::overflow_error("pair_product_set: dimension too large");
  const auto primes = first_primes(static_cast<std::size_t>(d));
  PairProductSet I;
  I.d = d;
  I.members.reserve(std::size_t{1} << pairs);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    MonomialId m = 1;
    for (int j = 0; j < pairs; ++j)
      m = checked_mul(m, primes[2 * j + ((mask >> j) & 1)]);
    I.members.push_back(m);
  }
  std::sort(I.members.begin(), I.members.end());
  return I;
}

std::vector<MonomialId> divisor_closure(const PairProductSet& I) {
  std::set<MonomialId> closure;
  for (const MonomialId m : I.members) {
    const MultiIndex e = factorize(m, I.d);
    std::vector<MonomialId> divisors{1};
    for (int i = 0; i < I.d; ++i) {
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
    closure.insert(divisors.begin(), divisors.end());
  }
  return {closure.begin(), closure.end()};
}

}  // namespace polyhankel
