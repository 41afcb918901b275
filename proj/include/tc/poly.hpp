#pragma once

// Dense polynomials over GF(2): arithmetic, parsing/printing, factorization,
// and the structure of X^n - 1.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tc/intmath.hpp"

namespace tc {

/// Polynomial over GF(2) stored as a little-endian bit vector: bit i of the
/// word array is the coefficient of X^i. The word array never carries
/// trailing zero words, so the zero polynomial is the empty array.
class Poly {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Poly() = default;

  static Poly zero() { return {}; }
  static Poly one() { return from_bits(1); }
  static Poly x() { return from_bits(2); }

  static Poly from_bits(Word bits) {
    Poly p;
    if (bits != 0) p.words_.push_back(bits);
    return p;
  }

  static Poly monomial(std::size_t k) {
    Poly p;
    p.set(k, true);
    return p;
  }

  /// X^n + 1, which is X^n - 1 in characteristic 2.
  static Poly xn_minus_1(std::size_t n) {
    Poly p = monomial(n);
    p.flip(0);
    return p;
  }

  /// Accepts an ascending bit-string ("1101" = 1 + X + X^3) or the human
  /// form ("X^3+X+1"). '-' is accepted as a term separator since it
  /// coincides with '+' over GF(2).
  static Poly parse(std::string_view text);

  bool is_zero() const { return words_.empty(); }
  bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

  /// Degree, or nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const {
    if (words_.empty()) return std::nullopt;
    return (words_.size() - 1) * kWordBits + (kWordBits - 1 - std::countl_zero(words_.back()));
  }

  /// Degree of a polynomial known to be nonzero.
  std::size_t deg() const {
    if (words_.empty()) throw std::domain_error("degree of the zero polynomial");
    return *degree();
  }

  bool coeff(std::size_t i) const {
    const std::size_t w = i / kWordBits;
    return w < words_.size() && ((words_[w] >> (i % kWordBits)) & 1U);
  }

  void set(std::size_t i, bool value) {
    const std::size_t w = i / kWordBits;
    if (value) {
      if (w >= words_.size()) words_.resize(w + 1, 0);
      words_[w] |= Word{1} << (i % kWordBits);
    } else if (w < words_.size()) {
      words_[w] &= ~(Word{1} << (i % kWordBits));
      trim();
    }
  }

  void flip(std::size_t i) { set(i, !coeff(i)); }

  const std::vector<Word>& words() const { return words_; }

  /// Coefficient bits as a single word; requires degree < 64.
  Word to_bits() const {
    if (words_.size() > 1) throw std::overflow_error("polynomial does not fit one word");
    return words_.empty() ? 0 : words_[0];
  }

  std::size_t weight() const {
    std::size_t w = 0;
    for (Word x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
  }

  Poly& operator+=(const Poly& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a += b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly out;
    out.words_.assign(a.words_.size() + b.words_.size(), 0);
    for (std::size_t wi = 0; wi < a.words_.size(); ++wi) {
      Word bits = a.words_[wi];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        bits &= bits - 1;
        out.xor_shifted(b, wi * kWordBits + static_cast<std::size_t>(bit));
      }
    }
    out.trim();
    return out;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// p(X)^2, computed by spreading bits (Frobenius is linear in char 2).
  Poly square() const {
    Poly out;
    out.words_.assign(words_.size() * 2, 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out.words_[2 * i] = spread(static_cast<std::uint32_t>(words_[i]));
      out.words_[2 * i + 1] = spread(static_cast<std::uint32_t>(words_[i] >> 32));
    }
    out.trim();
    return out;
  }

  /// Square root of a perfect square (all odd coefficients zero).
  Poly sqrt() const {
    Poly out;
    if (is_zero()) return out;
    const std::size_t d = deg();
    for (std::size_t i = 0; i <= d; ++i) {
      if (!coeff(i)) continue;
      if (i % 2 != 0) throw std::domain_error("sqrt of a non-square polynomial");
      out.set(i / 2, true);
    }
    return out;
  }

  Poly derivative() const {
    Poly out;
    if (is_zero()) return out;
    const std::size_t d = deg();
    for (std::size_t i = 1; i <= d; i += 2)
      if (coeff(i)) out.set(i - 1, true);
    return out;
  }

  /// Polynomial shifted up by k positions (multiplication by X^k).
  Poly shifted(std::size_t k) const {
    Poly out;
    if (is_zero()) return out;
    out.words_.assign(words_.size() + k / kWordBits + 1, 0);
    out.xor_shifted(*this, k);
    out.trim();
    return out;
  }

  /// Ordering by the integer value of the coefficient vector, which sorts by
  /// degree first and then by coefficient bits.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
    if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Poly& a, const Poly& b) = default;

  /// Human form with descending exponents, e.g. "X^3+X+1".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = deg() + 1; i-- > 0;) {
      if (!coeff(i)) continue;
      if (!out.empty()) out += '+';
      if (i == 0) {
        out += '1';
      } else if (i == 1) {
        out += 'X';
      } else {
        out += "X^" + std::to_string(i);
      }
    }
    return out;
  }

  /// Ascending bit-string, e.g. "1101" for X^3+X+1; "0" for zero.
  std::string to_bitstring() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i <= deg(); ++i) out += coeff(i) ? '1' : '0';
    return out;
  }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  // this ^= src << shift; caller guarantees capacity or accepts growth.
  void xor_shifted(const Poly& src, std::size_t shift) {
    const std::size_t ws = shift / kWordBits;
    const unsigned bs = static_cast<unsigned>(shift % kWordBits);
    const std::size_t need = src.words_.size() + ws + 1;
    if (words_.size() < need) words_.resize(need, 0);
    for (std::size_t i = 0; i < src.words_.size(); ++i) {
      const Word w = src.words_[i];
      words_[i + ws] ^= w << bs;
      if (bs != 0) words_[i + ws + 1] ^= w >> (kWordBits - bs);
    }
  }

  static Word spread(std::uint32_t x) {
    Word v = x;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    v = (v | (v << 2)) & 0x3333333333333333ULL;
    v = (v | (v << 1)) & 0x5555555555555555ULL;
    return v;
  }

  std::vector<Word> words_;

  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
};

/// Quotient and remainder; throws std::domain_error for a zero divisor.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly rem = a;
  Poly quo;
  const std::size_t db = b.deg();
  while (!rem.is_zero() && rem.deg() >= db) {
    const std::size_t shift = rem.deg() - db;
    quo.set(shift, true);
    rem.xor_shifted(b, shift);
    rem.trim();
  }
  return {std::move(quo), std::move(rem)};
}

inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

inline bool divides(const Poly& d, const Poly& a) { return (a % d).is_zero(); }

/// Monic gcd; throws when both inputs are zero.
inline Poly gcd(Poly a, Poly b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return (a / gcd(a, b)) * b;
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& m) {
  Poly result = Poly::one() % m;
  base = base % m;
  while (e != 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    e >>= 1;
    if (e != 0) base = base.square() % m;
  }
  return result;
}

inline Poly Poly::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') s += c;
  if (s.empty()) throw std::invalid_argument("empty polynomial text");

  if (s.find_first_not_of("01") == std::string::npos) {
    Poly p;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == '1') p.set(i, true);
    return p;
  }

  Poly p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find_first_of("+-", pos);
    if (end == std::string::npos) end = s.size();
    const std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw std::invalid_argument("malformed polynomial: '" + std::string(text) + "'");
    std::size_t exponent = 0;
    if (term == "1") {
      exponent = 0;
    } else if (term == "0") {
      pos = end + 1;
      continue;
    } else if (term == "X" || term == "x") {
      exponent = 1;
    } else if (term.size() > 2 && (term[0] == 'X' || term[0] == 'x') && term[1] == '^') {
      const std::string digits = term.substr(2);
      if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 9)
        throw std::invalid_argument("bad exponent in term '" + term + "'");
      exponent = std::stoul(digits);
    } else {
      throw std::invalid_argument("unrecognized polynomial term '" + term + "'");
    }
    p.flip(exponent);
    pos = end + 1;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Factorization

/// Irreducible factors with multiplicities, sorted by (degree, bits).
struct FactorMultiset {
  std::vector<std::pair<Poly, unsigned>> factors;

  Poly product() const {
    Poly out = Poly::one();
    for (const auto& [f, m] : factors)
      for (unsigned i = 0; i < m; ++i) out *= f;
    return out;
  }

  /// Degrees with multiplicity, ascending.
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out;
    for (const auto& [f, m] : factors) out.insert(out.end(), m, f.deg());
    std::sort(out.begin(), out.end());
    return out;
  }

  unsigned max_multiplicity() const {
    unsigned m = 0;
    for (const auto& [f, k] : factors) m = std::max(m, k);
    return m;
  }
};

struct FactorOptions {
  std::uint64_t seed = 0x5eed'0f'2f'ac'70ULL;
};

namespace detail {

inline std::vector<std::size_t> prime_divisors_small(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// X^(2^k) mod f by k successive squarings.
inline Poly frobenius_power(const Poly& f, std::size_t k) {
  Poly h = Poly::x() % f;
  for (std::size_t i = 0; i < k; ++i) h = h.square() % f;
  return h;
}

// Square-free decomposition: pairs (g_i, i) with f = prod g_i^i, each g_i
// square-free and pairwise coprime. Characteristic 2: when f' = 0 the
// polynomial is a perfect square and the recursion runs on its root.
inline void squarefree_decompose(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) {
  if (f.deg() == 0) return;
  const Poly df = f.derivative();
  if (df.is_zero()) {
    squarefree_decompose(f.sqrt(), mult * 2, out);
    return;
  }
  Poly c = gcd(f, df);
  Poly w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    Poly y = gcd(w, c);
    Poly fac = w / y;
    if (!fac.is_one()) out.emplace_back(std::move(fac), i * mult);
    w = std::move(y);
    c = c / w;
    ++i;
  }
  if (!c.is_one()) squarefree_decompose(c.sqrt(), mult * 2, out);
}

// Distinct-degree factorization of a square-free polynomial: pairs (g, d)
// where g is the product of all irreducible factors of degree d.
inline std::vector<std::pair<Poly, std::size_t>> distinct_degree(Poly f) {
  std::vector<std::pair<Poly, std::size_t>> out;
  Poly h = Poly::x() % f;
  std::size_t d = 0;
  while (!f.is_one() && 2 * (d + 1) <= f.deg()) {
    ++d;
    h = h.square() % f;
    Poly g = gcd(h + Poly::x(), f);
    if (!g.is_one()) {
      f = f / g;
      h = h % f;
      out.emplace_back(std::move(g), d);
    }
  }
  if (!f.is_one()) out.emplace_back(f, f.deg());
  return out;
}

inline Poly random_below(std::size_t degree_bound, std::mt19937_64& rng) {
  Poly p;
  for (std::size_t i = 0; i < degree_bound; ++i)
    if (rng() & 1U) p.set(i, true);
  return p;
}

// Equal-degree splitting with the GF(2) trace map Tr(a) = sum a^(2^i).
inline void equal_degree(const Poly& f, std::size_t d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.deg() == d) {
    out.push_back(f);
    return;
  }
  for (;;) {
    const Poly a = random_below(f.deg(), rng);
    Poly t = a;
    Poly s = a;
    for (std::size_t i = 1; i < d; ++i) {
      s = s.square() % f;
      t += s;
    }
    if (t.is_zero()) continue;
    Poly g = gcd(f, t);
    if (g.is_one() || g.deg() == f.deg()) continue;
    equal_degree(g, d, rng, out);
    equal_degree(f / g, d, rng, out);
    return;
  }
}

}  // namespace detail

/// Rabin's test: f of degree d is irreducible iff X^(2^d) = X mod f and
/// gcd(X^(2^(d/p)) - X, f) = 1 for every prime p | d.
inline bool is_irreducible(const Poly& f) {
  if (f.is_zero() || f.deg() == 0) return false;
  const std::size_t d = f.deg();
  if (d == 1) return true;
  if (detail::frobenius_power(f, d) != Poly::x() % f) return false;
  for (std::size_t p : detail::prime_divisors_small(d)) {
    if (!gcd(detail::frobenius_power(f, d / p) + Poly::x(), f).is_one()) return false;
  }
  return true;
}

/// Complete factorization over GF(2): square-free decomposition, then
/// distinct-degree, then equal-degree splitting. Throws on constant input.
inline FactorMultiset factor(const Poly& p, const FactorOptions& opts = {}) {
  if (p.is_zero() || p.deg() == 0) throw std::invalid_argument("factor: polynomial must have degree >= 1");
  std::mt19937_64 rng(opts.seed);
  std::vector<std::pair<Poly, unsigned>> sqf;
  detail::squarefree_decompose(p, 1, sqf);

  std::vector<std::pair<Poly, unsigned>> all;
  for (const auto& [g, mult] : sqf) {
    for (const auto& [part, d] : detail::distinct_degree(g)) {
      std::vector<Poly> irreducibles;
      detail::equal_degree(part, d, rng, irreducibles);
      for (auto& f : irreducibles) all.emplace_back(std::move(f), mult);
    }
  }
  std::sort(all.begin(), all.end());
  FactorMultiset out;
  for (auto& [f, m] : all) {
    if (!out.factors.empty() && out.factors.back().first == f) {
      out.factors.back().second += m;
    } else {
      out.factors.emplace_back(std::move(f), m);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// X^n - 1

/// Sizes of the 2-cyclotomic cosets modulo an odd n0 (orbits of k -> 2k).
inline std::vector<std::size_t> cyclotomic_coset_sizes(std::size_t n0) {
  if (n0 == 0 || n0 % 2 == 0) throw std::invalid_argument("cyclotomic cosets need an odd modulus");
  std::vector<bool> seen(n0, false);
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < n0; ++k) {
    if (seen[k]) continue;
    std::size_t len = 0;
    std::size_t j = k;
    while (!seen[j]) {
      seen[j] = true;
      ++len;
      j = (2 * j) % n0;
    }
    sizes.push_back(len);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

/// Degrees of the irreducible factors of X^n - 1 through the coset route:
/// with n = 2^a * n0, each coset size mod n0 repeated 2^a times.
inline std::vector<std::size_t> xn_minus_1_degrees_by_cosets(std::size_t n) {
  if (n == 0) throw std::invalid_argument("X^n - 1 needs n >= 1");
  const auto a = static_cast<unsigned>(std::countr_zero(n));
  const std::size_t n0 = n >> a;
  std::vector<std::size_t> out;
  for (std::size_t s : cyclotomic_coset_sizes(n0)) out.insert(out.end(), std::size_t{1} << a, s);
  std::sort(out.begin(), out.end());
  return out;
}

/// Above this n the factorization route is skipped and only cosets are used.
inline constexpr std::size_t kFactorRouteLimit = 1024;

/// Degrees (with multiplicity, ascending) of the irreducible factors of
/// X^n - 1. Both the factorization and the coset route are computed and must
/// agree; for n above kFactorRouteLimit only the coset route runs.
inline std::vector<std::size_t> xn_minus_1_degrees(std::size_t n) {
  auto by_cosets = xn_minus_1_degrees_by_cosets(n);
  if (n <= kFactorRouteLimit) {
    const auto by_factor = factor(Poly::xn_minus_1(n)).degrees();
    if (by_factor != by_cosets) throw std::logic_error("X^n - 1 degree routes disagree");
  }
  return by_cosets;
}

namespace detail {

// reach[j][t]: is t a sum over factors j.. with bounded multiplicities.
inline std::vector<std::vector<bool>> suffix_reach(const FactorMultiset& fm, std::size_t target) {
  const std::size_t k = fm.factors.size();
  std::vector<std::vector<bool>> reach(k + 1, std::vector<bool>(target + 1, false));
  reach[k][0] = true;
  for (std::size_t j = k; j-- > 0;) {
    const std::size_t d = fm.factors[j].first.deg();
    const unsigned cap = fm.factors[j].second;
    for (std::size_t t = 0; t <= target; ++t) {
      for (unsigned c = 0; c <= cap && c * d <= t; ++c) {
        if (reach[j + 1][t - c * d]) {
          reach[j][t] = true;
          break;
        }
      }
    }
  }
  return reach;
}

inline Poly assemble_divisor(const FactorMultiset& fm, const std::vector<unsigned>& counts) {
  Poly out = Poly::one();
  for (std::size_t j = 0; j < counts.size(); ++j)
    for (unsigned c = 0; c < counts[j]; ++c) out *= fm.factors[j].first;
  return out;
}

}  // namespace detail

/// All divisors of prod(factors) of degree exactly d, in lexicographic order
/// of their multiplicity vectors (factors sorted by degree, then bits).
/// At most `limit` divisors are produced.
inline std::vector<Poly> divisors_of_degree(const FactorMultiset& fm, std::size_t d, std::size_t limit = SIZE_MAX) {
  std::vector<Poly> out;
  const auto reach = detail::suffix_reach(fm, d);
  if (!reach[0][d]) return out;
  std::vector<unsigned> counts(fm.factors.size(), 0);
  // Depth-first over multiplicity vectors in lexicographic order, pruned by
  // suffix reachability.
  auto rec = [&](auto&& self, std::size_t j, std::size_t remaining) -> void {
    if (out.size() >= limit) return;
    if (j == fm.factors.size()) {
      if (remaining == 0) out.push_back(detail::assemble_divisor(fm, counts));
      return;
    }
    const std::size_t deg = fm.factors[j].first.deg();
    for (unsigned c = 0; c <= fm.factors[j].second && c * deg <= remaining; ++c) {
      if (!reach[j + 1][remaining - c * deg]) continue;
      counts[j] = c;
      self(self, j + 1, remaining - c * deg);
      counts[j] = 0;
    }
  };
  rec(rec, 0, d);
  return out;
}

/// A monic divisor of X^n - 1 of degree exactly d, or nullopt when none
/// exists. Ties go to the lexicographically smallest multiplicity vector.
inline std::optional<Poly> divisor_of_degree(std::size_t n, std::size_t d) {
  if (n == 0) throw std::invalid_argument("divisor_of_degree needs n >= 1");
  if (d > n) throw std::invalid_argument("divisor_of_degree: d exceeds n");
  if (d == 0) return Poly::one();
  const Poly target = Poly::xn_minus_1(n);
  const FactorMultiset fm = factor(target);
  auto found = divisors_of_degree(fm, d, 1);
  if (found.empty()) return std::nullopt;
  if (!divides(found.front(), target)) throw std::logic_error("divisor_of_degree produced a non-divisor");
  return found.front();
}

/// Largest irreducible degree accepted by poly_order (2^d - 1 must fit 64 bits).
inline constexpr std::size_t kMaxOrderDegree = 64;

/// Order of X modulo an irreducible f with f(0) = 1: the least e with
/// f | X^e - 1. The order divides 2^d - 1, so it is found by stripping prime
/// factors of 2^d - 1 while X^(e/p) stays 1.
inline std::uint64_t irreducible_order(const Poly& f) {
  const std::size_t d = f.deg();
  if (d > kMaxOrderDegree) throw std::domain_error("irreducible_order: degree exceeds 64");
  if (d == 1) return 1;  // only X+1 qualifies
  const std::uint64_t group = d == 64 ? UINT64_MAX : (std::uint64_t{1} << d) - 1;
  std::uint64_t e = group;
  const Poly unit = Poly::one();
  for (const auto& [p, k] : intmath::factorize(group)) {
    for (unsigned i = 0; i < k; ++i) {
      if (pow_mod(Poly::x(), e / p, f) != unit) break;
      e /= p;
    }
  }
  return e;
}

/// Least e >= 1 with f | X^e - 1. Requires f(0) = 1 and degree >= 1.
/// For f = prod g_i^(m_i) this is lcm(order(g_i)) * 2^ceil(log2 max m_i).
inline std::uint64_t poly_order(const Poly& f) {
  if (f.is_zero() || f.deg() == 0) throw std::invalid_argument("poly_order: degree must be >= 1");
  if (!f.coeff(0)) throw std::invalid_argument("poly_order: constant term must be 1");
  const FactorMultiset fm = factor(f);
  std::uint64_t e = 1;
  for (const auto& [g, m] : fm.factors) e = intmath::checked_lcm(e, irreducible_order(g));
  const unsigned mmax = fm.max_multiplicity();
  const auto shift = static_cast<unsigned>(std::bit_width(mmax - 1U));  // ceil(log2 mmax)
  return intmath::checked_mul(e, std::uint64_t{1} << shift);
}

}  // namespace tc
