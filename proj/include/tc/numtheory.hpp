#pragma once

// Multiplicative orders, l*, Euler phi, binomial parity, k1 and p-practical
// numbers.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tc/intmath.hpp"
#include "tc/poly.hpp"

namespace tc {

/// Multiplicative order of a modulo n: least e >= 1 with a^e = 1 (mod n).
/// l_a(1) = 1. Throws when gcd(a, n) > 1.
inline std::uint64_t mult_order(std::uint64_t a, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mult_order: n must be positive");
  if (n == 1) return 1;
  if (std::gcd(a, n) != 1) throw std::invalid_argument("mult_order: gcd(a, n) > 1");
  std::uint64_t x = a % n;
  std::uint64_t e = 1;
  while (x != 1) {
    x = intmath::mul_mod(x, a, n);
    ++e;
  }
  return e;
}

/// Largest divisor of n coprime to a.
inline std::uint64_t coprime_part(std::uint64_t a, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("coprime_part: n must be positive");
  for (std::uint64_t g = std::gcd(a, n); g != 1; g = std::gcd(a, n)) n /= g;
  return n;
}

/// l*_a(n) = l_a(n_(a)).
inline std::uint64_t l_star(std::uint64_t a, std::uint64_t n) { return mult_order(a, coprime_part(a, n)); }

inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

/// C(m, k) is odd iff the bits of k are a submask of the bits of m (Lucas).
inline bool binom_odd(std::uint64_t m, std::uint64_t k) {
  if (k > m) throw std::invalid_argument("binom_odd: k > m");
  return (k & ~m) == 0;
}

/// Least k in 1..m with C(m, k) odd; equals the lowest set bit of m.
/// m = 1 and m = 2 are accepted (returning 1 and 2) though the usual
/// hypothesis is m > 2.
inline std::uint64_t k1(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("k1: m must be positive");
  return m & (~m + 1);
}

/// Number of odd entries in row m of Pascal's triangle: 2^popcount(m).
inline std::uint64_t odd_count_row(std::uint64_t m) {
  const int v = std::popcount(m);
  if (v >= 64) throw std::overflow_error("odd_count_row overflow");
  return std::uint64_t{1} << v;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> lo;
  std::vector<std::uint64_t> hi;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

/// Result of the p-practicality test for n.
struct PracticalityWitness {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  bool practical = false;
  /// Smallest m in 1..n without a representation, when not practical.
  std::optional<std::uint64_t> missing_m;

  struct Item {
    std::uint64_t d;         // divisor of n
    std::uint64_t weight;    // l*_p(d)
    std::uint64_t capacity;  // phi(d) / l*_p(d)
  };
  std::vector<Item> items;

  /// For practical n: representation[m - 1][j] = n_d for items[j].
  std::vector<std::vector<std::uint64_t>> representation;
};

/// Subset-sum closure of a degree multiset: reachable[t] for t in 0..limit.
inline std::vector<bool> subset_sum_closure(const std::vector<std::size_t>& values, std::size_t limit) {
  std::vector<bool> reach(limit + 1, false);
  reach[0] = true;
  for (std::size_t v : values) {
    for (std::size_t t = limit + 1; t-- > v;)
      if (reach[t - v]) reach[t] = true;
  }
  return reach;
}

/// Is every degree 1..n attained by some divisor of X^n - 1 over GF(2)?
inline bool practical_by_factor_degrees(std::uint64_t n) {
  const auto reach = subset_sum_closure(xn_minus_1_degrees(n), n);
  return std::all_of(reach.begin() + 1, reach.end(), [](bool b) { return b; });
}

/// p-practicality by bounded knapsack: every m in 1..n must be a sum
/// sum_{d|n} l*_p(d) n_d with 0 <= n_d <= phi(d)/l*_p(d). For practical n
/// the witness stores, per m, the lexicographically first (n_d) over
/// divisors in ascending order. For p = 2 the verdict is cross-checked
/// against the factor degrees of X^n - 1.
inline PracticalityWitness is_p_practical(std::uint64_t p, std::uint64_t n) {
  if (!intmath::is_prime_trial(p)) throw std::invalid_argument("is_p_practical: p must be prime");
  if (n == 0) throw std::invalid_argument("is_p_practical: n must be positive");

  PracticalityWitness w;
  w.n = n;
  w.p = p;
  for (std::uint64_t d : divisors(n)) {
    const std::uint64_t weight = l_star(p, d);
    const std::uint64_t phi = euler_phi(d);
    if (phi % weight != 0) throw std::logic_error("l*_p(d) does not divide phi(d)");
    w.items.push_back({d, weight, phi / weight});
  }

  const std::size_t k = w.items.size();
  std::vector<std::vector<bool>> reach(k + 1, std::vector<bool>(n + 1, false));
  reach[k][0] = true;
  for (std::size_t j = k; j-- > 0;) {
    const auto& it = w.items[j];
    for (std::uint64_t t = 0; t <= n; ++t) {
      for (std::uint64_t c = 0; c <= it.capacity && c * it.weight <= t; ++c) {
        if (reach[j + 1][t - c * it.weight]) {
          reach[j][t] = true;
          break;
        }
      }
    }
  }

  for (std::uint64_t m = 1; m <= n; ++m) {
    if (!reach[0][m]) {
      w.missing_m = m;
      break;
    }
  }
  w.practical = !w.missing_m.has_value();

  if (w.practical) {
    w.representation.reserve(n);
    for (std::uint64_t m = 1; m <= n; ++m) {
      std::vector<std::uint64_t> rep(k, 0);
      std::uint64_t rest = m;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& it = w.items[j];
        std::uint64_t c = 0;
        while (!reach[j + 1][rest - c * it.weight]) ++c;
        rep[j] = c;
        rest -= c * it.weight;
      }
      w.representation.push_back(std::move(rep));
    }
  }

  if (p == 2 && practical_by_factor_degrees(n) != w.practical)
    throw std::logic_error("knapsack and factor-degree practicality verdicts disagree");
  return w;
}

}  // namespace tc
