#pragma once

// Matrices of size <= 8 packed into one 64-bit word, row i in bits 8i..8i+7.
// Used by the exhaustive searches, where Mat's 64-row storage dominates.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "tc/mat.hpp"

namespace tc::packed {

using Word = std::uint64_t;

inline constexpr std::size_t kMaxPacked = 8;

inline constexpr Word identity(std::size_t n) {
  Word w = 0;
  for (std::size_t i = 0; i < n; ++i) w |= Word{1} << (9 * i);
  return w;
}

inline Word mul(Word a, Word b) {
  Word out = 0;
  while (a != 0) {
    const auto bit = static_cast<unsigned>(std::countr_zero(a));
    // Entry (i, j) of a selects row j of b into row i.
    out ^= ((b >> (8 * (bit & 7U))) & 0xFFU) << (8 * (bit >> 3));
    a &= a - 1;
  }
  return out;
}

inline Word pow(Word a, std::uint64_t e, std::size_t n) {
  Word result = identity(n);
  while (e != 0) {
    if (e & 1U) result = mul(result, a);
    e >>= 1;
    if (e != 0) a = mul(a, a);
  }
  return result;
}

/// Least k in 1..cap with a^k = I, or 0.
inline unsigned order_up_to(Word a, std::size_t n, unsigned cap) {
  const Word id = identity(n);
  Word p = a;
  for (unsigned k = 1; k <= cap; ++k) {
    if (p == id) return k;
    p = mul(p, a);
  }
  return 0;
}

/// Least k in 1..n with a^k = O, or 0 when a is not nilpotent.
inline unsigned nil_index(Word a, std::size_t n) {
  Word p = a;
  for (unsigned k = 1; k <= n; ++k) {
    if (p == 0) return k;
    p = mul(p, a);
  }
  return 0;
}

inline Word diagonal_bits(Word a, std::size_t n) {
  Word d = 0;
  for (std::size_t i = 0; i < n; ++i) d |= ((a >> (9 * i)) & 1U) << i;
  return d;
}

inline Word from_mat(const Mat& m) {
  if (m.size() > kMaxPacked) throw std::invalid_argument("packed matrices need n <= 8");
  Word w = 0;
  for (std::size_t i = 0; i < m.size(); ++i) w |= static_cast<Word>(m.row(i)) << (8 * i);
  return w;
}

inline Mat to_mat(Word w, std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, (w >> (8 * i)) & 0xFFU);
  return m;
}

}  // namespace tc::packed
