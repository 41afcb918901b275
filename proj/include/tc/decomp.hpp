#pragma once

// Constructive decompositions: torsion-clean splittings of companion blocks
// and of arbitrary matrices through their Frobenius form, nil-clean
// witnesses, and the torsion profile of Z/mZ.

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tc/canon.hpp"
#include "tc/charpoly.hpp"
#include "tc/intmath.hpp"
#include "tc/krylov.hpp"
#include "tc/mat.hpp"
#include "tc/numtheory.hpp"
#include "tc/packed.hpp"
#include "tc/poly.hpp"
#include "tc/ring.hpp"

namespace tc {

struct DecompOptions {
  std::uint64_t seed = 0x7c15eed;
  std::uint64_t budget = 1'000'000;  // random idempotent draws per block
};

/// How one companion block of the Frobenius form was handled.
struct BlockRecord {
  Poly q;  // block polynomial
  Poly r;  // characteristic polynomial of the block's unit
  std::string strategy;
  std::size_t idempotent_rank = 0;
};

/// a = e + u with e idempotent and u^exponent = I.
struct TorsionDecomposition {
  Mat e;
  Mat u;
  std::uint64_t exponent = 1;
  std::uint64_t unit_order = 1;
  std::size_t idempotent_rank = 0;
  std::string strategy;
  std::vector<BlockRecord> blocks;
};

struct NilCleanDecomposition {
  Mat e;
  Mat nil;
  std::size_t nil_index = 1;
  std::string strategy;
};

/// Why almost_torsion_decompose could not finish. `block_degree` names the
/// companion block that failed.
class DecompositionError : public std::runtime_error {
 public:
  enum class Kind { NoDivisor, SearchFailed };
  DecompositionError(Kind kind, std::size_t block_degree, const std::string& what)
      : std::runtime_error(what), kind_(kind), block_degree_(block_degree) {}
  Kind kind() const { return kind_; }
  std::size_t block_degree() const { return block_degree_; }

 private:
  Kind kind_;
  std::size_t block_degree_;
};

using Checklist = std::vector<std::pair<std::string, bool>>;

/// Independent re-verification of every invariant against the input.
inline Checklist verify_decomposition(const Mat& a, const TorsionDecomposition& d) {
  Checklist out;
  out.emplace_back("e is idempotent", is_idempotent(d.e));
  out.emplace_back("u is invertible", is_invertible(d.u));
  out.emplace_back("e + u equals the input", d.e + d.u == a);
  out.emplace_back("u^exponent = I", d.u.pow(d.exponent).is_identity());
  out.emplace_back("u^unit_order = I", d.u.pow(d.unit_order).is_identity());
  out.emplace_back("unit_order divides exponent", d.unit_order != 0 && d.exponent % d.unit_order == 0);
  out.emplace_back("idempotent_rank = rank(e)", d.idempotent_rank == rank(d.e));
  return out;
}

inline Checklist verify_decomposition(const Mat& a, const NilCleanDecomposition& d) {
  Checklist out;
  out.emplace_back("e is idempotent", is_idempotent(d.e));
  out.emplace_back("e + nil equals the input", d.e + d.nil == a);
  out.emplace_back("nil^nil_index = O", d.nil.pow(d.nil_index).is_zero());
  out.emplace_back("nil^(nil_index-1) != O", d.nil_index >= 1 && !d.nil.pow(d.nil_index - 1).is_zero());
  return out;
}

inline bool all_passed(const Checklist& c) {
  for (const auto& [name, ok] : c)
    if (!ok) return false;
  return true;
}

namespace detail {

inline bool divides_xn_minus_1(const Poly& r, std::uint64_t n) {
  return pow_mod(Poly::x(), n, r) == Poly::one() % r;
}

/// Recovers q from a companion matrix, rejecting anything else.
inline Poly companion_poly(const Mat& c) {
  const std::size_t s = c.size();
  Poly q = Poly::monomial(s);
  for (std::size_t i = 0; i < s; ++i)
    if (c.get(i, s - 1)) q.flip(i);
  if (companion(q) != c) throw std::invalid_argument("matrix is not a companion matrix");
  return q;
}

struct BlockResult {
  Mat e;
  std::string strategy;
};

// (q, r, seed, budget) -> outcome. Search results depend on nothing else.
inline std::optional<BlockResult> search_block(const Poly& q, const Poly& r, const DecompOptions& opts) {
  using Key = std::tuple<Poly, Poly, std::uint64_t, std::uint64_t>;
  static std::mutex mu;
  static std::map<Key, std::optional<BlockResult>> memo;
  const Key key{q, r, opts.seed, opts.budget};
  {
    const std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }

  const std::size_t s = q.deg();
  const Mat c = companion(q);
  auto works = [&](const Mat& e) {
    const Mat u = c + e;
    return evaluate(r, u).is_zero() && charpoly(u) == r;
  };
  // trace(U) = trace(C) + trace(E) and trace(E) = rank(E) mod 2.
  const bool parity = r.coeff(s - 1) != q.coeff(s - 1);

  std::optional<BlockResult> found;
  if (q == r) {
    found = BlockResult{Mat::zero(s), "zero-idempotent"};
  } else if (charpoly(c + Mat::identity(s)) == r) {
    found = BlockResult{Mat::identity(s), "identity-idempotent"};
  } else if (s <= 5) {
    for (const Mat& e : cached_idempotents({RingKind::Full, s})) {
      if (e.trace() != parity) continue;
      if (works(e)) {
        found = BlockResult{e, "exhaustive-scan"};
        break;
      }
    }
  } else if (s <= 10) {
    std::vector<std::size_t> ranks;
    for (std::size_t k = 1; k < s; ++k)
      if ((k % 2 == 1) == parity) ranks.push_back(k);
    std::mt19937_64 rng(intmath::splitmix64(opts.seed ^ intmath::splitmix64(q.to_bits() * 0x10000 + r.to_bits())));
    for (std::uint64_t draw = 0; draw < opts.budget && !ranks.empty(); ++draw) {
      const Mat e = rand_idempotent(s, ranks[rng() % ranks.size()], rng);
      if (works(e)) {
        found = BlockResult{e, "random-search"};
        break;
      }
    }
  }

  const std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, found);
  return found;
}

inline const FactorMultiset& xn_minus_1_factors(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, FactorMultiset> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, factor(Poly::xn_minus_1(n))).first;
  return it->second;
}

struct BlockSplit {
  Mat e;
  Mat u;
  Poly r;
  std::string strategy;
};

// Decomposes companion(q) with u^n = I. Tries every degree-s divisor of
// X^n - 1 in order, then splits q into coprime prime-power parts.
inline BlockSplit decompose_block(const Poly& q, std::uint64_t n, const DecompOptions& opts) {
  const std::size_t s = q.deg();
  const auto candidates = divisors_of_degree(xn_minus_1_factors(n), s);
  if (candidates.empty())
    throw DecompositionError(DecompositionError::Kind::NoDivisor, s,
                             "no divisor of X^" + std::to_string(n) + "-1 of degree " + std::to_string(s));
  const Mat c = companion(q);
  for (const Poly& r : candidates) {
    if (auto hit = search_block(q, r, opts)) return {hit->e, c + hit->e, r, hit->strategy};
  }
  const PrimarySplit ps = primary_split(q);
  if (ps.parts.size() < 2)
    throw DecompositionError(DecompositionError::Kind::SearchFailed, s,
                             "no idempotent found for companion of " + q.to_string());
  std::vector<Mat> es;
  std::vector<Mat> us;
  Poly r = Poly::one();
  for (const Poly& part : ps.parts) {
    BlockSplit sub = decompose_block(part, n, opts);
    es.push_back(sub.e);
    us.push_back(sub.u);
    r *= sub.r;
  }
  const Mat tinv = *inverse(ps.transform);
  const Mat e = ps.transform * assemble_block_diagonal(es) * tinv;
  const Mat u = ps.transform * assemble_block_diagonal(us) * tinv;
  return {e, u, r, "primary-split"};
}

inline TorsionDecomposition finish(const Mat& a, Mat e, Mat u, std::uint64_t n, std::string strategy) {
  TorsionDecomposition d;
  d.e = std::move(e);
  d.u = std::move(u);
  d.exponent = n;
  const auto ord = unit_order(d.u);
  if (!ord) throw std::logic_error("decomposition produced a singular unit");
  d.unit_order = *ord;
  d.idempotent_rank = rank(d.e);
  d.strategy = std::move(strategy);
  if (!all_passed(verify_decomposition(a, d))) throw std::logic_error("decomposition failed verification");
  return d;
}

}  // namespace detail

/// Splits a companion matrix c = companion(q) as E + U with E idempotent
/// and charpoly(U) = r, so that r | X^n - 1 gives U^n = I. Strategies in
/// order: E = O, E = I, exhaustive scan of idempotents (size <= 5),
/// random rank-k idempotents with k of the required parity (size <= 10).
/// nullopt means the search failed within budget.
inline std::optional<TorsionDecomposition> companion_torsion_decompose(const Mat& c, std::uint64_t n, const Poly& r,
                                                                       const DecompOptions& opts = {}) {
  const Poly q = detail::companion_poly(c);
  if (n == 0) throw std::invalid_argument("exponent must be positive");
  if (r.is_zero() || r.deg() != q.deg()) throw std::invalid_argument("r must have the block's degree");
  if (!detail::divides_xn_minus_1(r, n))
    throw std::invalid_argument(r.to_string() + " does not divide X^" + std::to_string(n) + "-1");
  const auto hit = detail::search_block(q, r, opts);
  if (!hit) return std::nullopt;
  TorsionDecomposition d = detail::finish(c, hit->e, c + hit->e, n, hit->strategy);
  d.blocks.push_back({q, r, hit->strategy, d.idempotent_rank});
  return d;
}

/// a = E + U with U^n = I, built block by block on the Frobenius form and
/// conjugated back. Throws DecompositionError when a block has no divisor
/// of X^n - 1 of its degree or every search fails.
inline TorsionDecomposition almost_torsion_decompose(const Mat& a, std::uint64_t n, const DecompOptions& opts = {}) {
  if (n == 0) throw std::invalid_argument("exponent must be positive");
  const FrobeniusForm f = frobenius_form(a);
  std::vector<Mat> es;
  std::vector<Mat> us;
  std::vector<BlockRecord> records;
  for (const Poly& q : f.invariant_factors) {
    detail::BlockSplit b = detail::decompose_block(q, n, opts);
    records.push_back({q, b.r, b.strategy, rank(b.e)});
    es.push_back(std::move(b.e));
    us.push_back(std::move(b.u));
  }
  const Mat pinv = *inverse(f.transform);
  TorsionDecomposition d = detail::finish(a, f.transform * assemble_block_diagonal(es) * pinv,
                                          f.transform * assemble_block_diagonal(us) * pinv, n, "frobenius-blocks");
  d.blocks = std::move(records);
  return d;
}

/// Some idempotent E with A + E nilpotent. Exhaustive with the least
/// nilpotency index for n <= 4 (first in enumeration order on ties);
/// random draws with rank(E) = trace(A) mod 2 for 5 <= n <= 10.
inline NilCleanDecomposition nil_clean_decompose(const Mat& a, const DecompOptions& opts = {}) {
  const std::size_t n = a.size();
  if (n <= 4) {
    // nil(A + E) forces trace(E) = trace(A); index 1 is A + E = O.
    const packed::Word pa = packed::from_mat(a);
    const bool tr = a.trace();
    const Mat* best_e = nullptr;
    unsigned best_k = 0;
    for (const Mat& e : cached_idempotents({RingKind::Full, n})) {
      if (e.trace() != tr) continue;
      const unsigned k = packed::nil_index(pa ^ packed::from_mat(e), n);
      if (k != 0 && (best_k == 0 || k < best_k)) {
        best_e = &e;
        best_k = k;
        if (k == 1) break;
      }
    }
    if (best_e == nullptr) throw std::logic_error("no nil-clean witness among all idempotents");
    return {*best_e, a + *best_e, best_k, "exhaustive-min-index"};
  }
  if (n > 10) throw BudgetError("nil-clean search is limited to n <= 10");
  const bool parity = a.trace();
  std::vector<std::size_t> ranks;
  for (std::size_t k = 0; k <= n; ++k)
    if ((k % 2 == 1) == parity) ranks.push_back(k);
  std::uint64_t h = n;
  for (std::size_t i = 0; i < n; ++i) h = intmath::splitmix64(h ^ a.row(i));
  std::mt19937_64 rng(intmath::splitmix64(opts.seed ^ h));
  for (std::uint64_t draw = 0; draw < opts.budget; ++draw) {
    const Mat e = rand_idempotent(n, ranks[rng() % ranks.size()], rng);
    if (const auto k = nilpotency_index(a + e)) return {e, a + e, *k, "random-search"};
  }
  throw BudgetError("nil-clean search exhausted its budget (unexpected for a full matrix ring)");
}

struct ZnProfile {
  std::uint64_t plain = 0;  // least n with r = u + e for all r
  std::uint64_t weak = 0;   // least n with r = u + e or r = u - e
};

/// Torsion profile of Z/mZ by brute force over units, idempotents and the
/// divisors of the exponent of the unit group.
inline ZnProfile zn_torsion_profile(std::uint64_t modulus) {
  if (modulus < 2 || modulus > 10'000) throw std::invalid_argument("modulus must be in 2..10000");
  const std::uint64_t m = modulus;
  std::vector<std::uint64_t> order(m, 0);  // 0 marks non-units
  std::uint64_t exponent = 1;
  for (std::uint64_t u = 1; u < m; ++u) {
    if (std::gcd(u, m) != 1) continue;
    std::uint64_t x = u;
    std::uint64_t k = 1;
    while (x != 1) {
      x = x * u % m;
      ++k;
    }
    order[u] = k;
    exponent = std::lcm(exponent, k);
  }
  std::vector<std::uint64_t> idem;
  for (std::uint64_t e = 0; e < m; ++e)
    if (e * e % m == e) idem.push_back(e);

  // Orders of the units available to each r.
  std::vector<std::vector<std::uint64_t>> plain(m);
  std::vector<std::vector<std::uint64_t>> weak(m);
  for (std::uint64_t r = 0; r < m; ++r) {
    for (std::uint64_t e : idem) {
      const std::uint64_t minus = (r + m - e) % m;  // r = u + e
      const std::uint64_t plus = (r + e) % m;       // r = u - e
      if (order[minus] != 0) {
        plain[r].push_back(order[minus]);
        weak[r].push_back(order[minus]);
      }
      if (order[plus] != 0) weak[r].push_back(order[plus]);
    }
  }
  auto least = [&](const std::vector<std::vector<std::uint64_t>>& avail) -> std::uint64_t {
    // If n works so does gcd(n, exponent), so the least n divides exponent.
    for (std::uint64_t n : divisors(exponent)) {
      bool ok = true;
      for (std::uint64_t r = 0; r < m && ok; ++r) {
        bool any = false;
        for (std::uint64_t o : avail[r]) any = any || n % o == 0;
        ok = any;
      }
      if (ok) return n;
    }
    throw std::logic_error("some residue has no decomposition");
  };
  return {least(plain), least(weak)};
}

}  // namespace tc
