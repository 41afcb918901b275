#pragma once

// Full and upper-triangular matrix rings over GF(2): integer encoding of
// elements, idempotent enumeration and random idempotents of a given rank.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tc/mat.hpp"

namespace tc {

/// Raised when a request exceeds an enumeration or search budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RingKind { Full, UpperTriangular };

struct RingSpec {
  RingKind kind = RingKind::Full;
  std::size_t size = 1;

  /// Number of free entries, i.e. log2 of the element count.
  std::size_t element_bits() const { return kind == RingKind::Full ? size * size : size * (size + 1) / 2; }

  std::uint64_t element_count() const {
    if (element_bits() >= 64) throw BudgetError("ring has 2^64 or more elements");
    return std::uint64_t{1} << element_bits();
  }

  bool contains(const Mat& a) const {
    return a.size() == size && (kind == RingKind::Full || a.is_upper_triangular());
  }

  std::string name() const { return (kind == RingKind::Full ? "M" : "T") + std::to_string(size); }

  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

/// Largest element_bits for which enumeration is allowed (2^25 elements).
inline constexpr std::size_t kEnumerationBits = 25;

inline void check_dim_for_ring(const RingSpec& ring) {
  if (ring.size == 0 || ring.size > Mat::kMaxDim) throw std::invalid_argument("ring size must be in 1..64");
}

// Elements are indexed by their free entries read row by row, row 0 most
// significant; within a row the bit for column j is worth 2^(j - first).
// Numeric order of indices is lexicographic order of the row bit patterns.

inline Mat decode(const RingSpec& ring, std::uint64_t index) {
  const std::size_t n = ring.size;
  Mat m(n);
  if (ring.kind == RingKind::Full) {
    for (std::size_t i = n; i-- > 0;) {
      m.set_row(i, index & low_mask(n));
      index >>= n;
    }
  } else {
    for (std::size_t i = n; i-- > 0;) {
      const std::size_t w = n - i;
      m.set_row(i, (index & low_mask(w)) << i);
      index >>= w;
    }
  }
  return m;
}

inline std::uint64_t encode(const RingSpec& ring, const Mat& m) {
  if (!ring.contains(m)) throw std::invalid_argument("matrix is not in " + ring.name());
  const std::size_t n = ring.size;
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ring.kind == RingKind::Full) {
      index = (index << n) | m.row(i);
    } else {
      index = (index << (n - i)) | (m.row(i) >> i);
    }
  }
  return index;
}

namespace detail {

// Idempotents of M_n with a prescribed image V: E = sum_j b_j c_j^T where
// b_j is the reduced echelon basis of V and c_j = e_{pivot j} + w_j with
// w_j in the annihilator of V. Every idempotent arises exactly once.
inline void idempotents_with_image(std::size_t n, const std::vector<BitVec>& basis,
                                   const std::vector<std::size_t>& pivots, std::vector<Mat>& out) {
  const std::size_t k = basis.size();
  const std::vector<BitVec> perp = kernel(basis, n);
  const std::size_t free_bits = perp.size() * k;
  for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << free_bits); ++choice) {
    std::vector<BitVec> c(k);
    for (std::size_t j = 0; j < k; ++j) {
      BitVec w = BitVec{1} << pivots[j];
      for (std::size_t t = 0; t < perp.size(); ++t)
        if ((choice >> (j * perp.size() + t)) & 1U) w ^= perp[t];
      c[j] = w;
    }
    Mat e(n);
    for (std::size_t r = 0; r < n; ++r) {
      BitVec row = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((basis[j] >> r) & 1U) row ^= c[j];
      e.set_row(r, row);
    }
    out.push_back(e);
  }
}

inline std::vector<Mat> generate_full_idempotents(std::size_t n) {
  std::vector<Mat> out;
  // Reduced echelon bases: choose pivot set, then the free entries in
  // non-pivot columns to the right of each pivot.
  for (std::uint64_t pivmask = 0; pivmask < (std::uint64_t{1} << n); ++pivmask) {
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < n; ++c)
      if ((pivmask >> c) & 1U) pivots.push_back(c);
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (basis row, column)
    for (std::size_t j = 0; j < pivots.size(); ++j)
      for (std::size_t c = pivots[j] + 1; c < n; ++c)
        if (((pivmask >> c) & 1U) == 0) slots.emplace_back(j, c);
    for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << slots.size()); ++fill) {
      std::vector<BitVec> basis;
      for (std::size_t p : pivots) basis.push_back(BitVec{1} << p);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if ((fill >> s) & 1U) basis[slots[s].first] |= BitVec{1} << slots[s].second;
      idempotents_with_image(n, basis, pivots, out);
    }
  }
  return out;
}

}  // namespace detail

/// Every idempotent of the ring, each once, in increasing index order.
/// Full rings are generated from image/complement data; triangular rings
/// are filtered from the whole element space.
inline std::vector<Mat> idempotents(const RingSpec& ring) {
  check_dim_for_ring(ring);
  if (ring.element_bits() > kEnumerationBits)
    throw BudgetError("idempotent enumeration of " + ring.name() + " exceeds 2^25 elements");
  std::vector<std::pair<std::uint64_t, Mat>> keyed;
  if (ring.kind == RingKind::Full) {
    for (Mat& e : detail::generate_full_idempotents(ring.size)) keyed.emplace_back(encode(ring, e), e);
  } else {
    for (std::uint64_t idx = 0; idx < ring.element_count(); ++idx) {
      const Mat e = decode(ring, idx);
      if (is_idempotent(e)) keyed.emplace_back(idx, e);
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Mat> out;
  out.reserve(keyed.size());
  for (auto& [idx, e] : keyed) out.push_back(e);
  return out;
}

/// Shared, lazily built idempotent list for a ring. Thread safe.
inline const std::vector<Mat>& cached_idempotents(const RingSpec& ring) {
  static std::mutex mu;
  static std::map<std::pair<int, std::size_t>, std::vector<Mat>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<int>(ring.kind), ring.size);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, idempotents(ring)).first;
  return it->second;
}

inline constexpr int kRandIdempotentRetries = 64;

/// E = X (Y X)^-1 Y with X n x k and Y k x n uniform, redrawn until Y X is
/// invertible. Idempotent of rank k by construction.
inline Mat rand_idempotent(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  if (n == 0 || n > Mat::kMaxDim) throw std::invalid_argument("rand_idempotent: n must be in 1..64");
  if (k > n) throw std::invalid_argument("rand_idempotent: rank exceeds dimension");
  if (k == 0) return Mat::zero(n);
  if (k == n) return Mat::identity(n);
  for (int attempt = 0; attempt < kRandIdempotentRetries; ++attempt) {
    std::vector<BitVec> x(n);  // n rows of k bits
    std::vector<BitVec> y(k);  // k rows of n bits
    for (BitVec& r : x) r = rng() & low_mask(k);
    for (BitVec& r : y) r = rng() & low_mask(n);
    Mat yx(k);
    for (std::size_t i = 0; i < k; ++i) {
      BitVec row = 0;
      for (std::size_t l = 0; l < n; ++l)
        if ((y[i] >> l) & 1U) row ^= x[l];
      yx.set_row(i, row);
    }
    const auto inv = inverse(yx);
    if (!inv) continue;
    std::vector<BitVec> m(k);  // (YX)^-1 Y, k rows of n bits
    for (std::size_t i = 0; i < k; ++i) {
      BitVec row = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (inv->get(i, j)) row ^= y[j];
      m[i] = row;
    }
    Mat e(n);
    for (std::size_t r = 0; r < n; ++r) {
      BitVec row = 0;
      for (std::size_t j = 0; j < k; ++j)
        if ((x[r] >> j) & 1U) row ^= m[j];
      e.set_row(r, row);
    }
    return e;
  }
  throw BudgetError("rand_idempotent: no invertible Y X within 64 draws");
}

inline Mat rand_idempotent(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return rand_idempotent(n, k, rng);
}

}  // namespace tc
