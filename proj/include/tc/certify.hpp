#pragma once

// Brute-force certification of (almost) m-torsion cleanness and of the
// nil-clean index for small full and upper-triangular matrix rings.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tc/intmath.hpp"
#include "tc/mat.hpp"
#include "tc/numtheory.hpp"
#include "tc/packed.hpp"
#include "tc/ring.hpp"

namespace tc {

/// Largest element_bits certified exhaustively (T_6 has 21, M_4 has 16).
inline constexpr std::size_t kExhaustiveBits = 21;
/// Order tables are precomputed up to this many element bits.
inline constexpr std::size_t kTableBits = 22;
/// Flags are held in a 64-bit mask, one bit per m.
inline constexpr std::uint64_t kMaxMmax = 64;
inline constexpr std::uint64_t kDefaultSamples = 100'000;

struct CertifyOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> samples;  // sampling mode when set
  std::uint64_t seed = 0x7c15eed;
};

struct TorsionCertificate {
  RingSpec ring;
  std::uint64_t m_max = 0;
  std::vector<bool> almost_flags;  // almost_flags[m - 1]
  std::optional<std::uint64_t> minimal_m;
  std::map<std::uint64_t, Mat> failing_witness;  // m -> first failing element
  std::uint64_t element_count = 0;
  std::uint64_t idempotent_count = 0;
  std::uint64_t checked_count = 0;  // elements examined
  bool exhaustive = true;
  double wall_time = 0;  // seconds

  bool flag(std::uint64_t m) const { return m >= 1 && m <= m_max && almost_flags[m - 1]; }

  /// m-torsion clean in the strict sense: m is the least exponent that works.
  bool torsion_clean(std::uint64_t m) const { return minimal_m == m; }
};

inline std::uint64_t default_m_max(const RingSpec& ring) { return 2 * ring.size + 4; }

namespace detail {

inline packed::Word packed_from_index(const RingSpec& ring, std::uint64_t index) {
  const std::size_t n = ring.size;
  packed::Word w = 0;
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t width = ring.kind == RingKind::Full ? n : n - i;
    const std::size_t shift = ring.kind == RingKind::Full ? 0 : i;
    w |= ((index & low_mask(width)) << shift) << (8 * i);
    index >>= width;
  }
  return w;
}

// Read-only data shared by the workers of one run.
struct RingTables {
  RingSpec ring;
  std::vector<packed::Word> idem;                        // packed idempotents
  std::vector<std::uint64_t> idem_index;                 // their indices
  std::vector<std::vector<std::uint32_t>> by_diagonal;  // triangular only
  std::vector<std::uint8_t> table;  // per-element order or nil index; empty if too large
};

inline RingTables make_tables(const RingSpec& ring) {
  check_dim_for_ring(ring);
  if (ring.size > packed::kMaxPacked) throw BudgetError("certification needs size <= 8");
  RingTables t;
  t.ring = ring;
  for (const Mat& e : cached_idempotents(ring)) {
    t.idem.push_back(packed::from_mat(e));
    t.idem_index.push_back(encode(ring, e));
  }
  if (ring.kind == RingKind::UpperTriangular) {
    t.by_diagonal.resize(std::size_t{1} << ring.size);
    for (std::uint32_t i = 0; i < t.idem.size(); ++i)
      t.by_diagonal[packed::diagonal_bits(t.idem[i], ring.size)].push_back(i);
  }
  return t;
}

// Runs body(begin, end, worker) on disjoint contiguous ranges.
template <class Body>
void parallel_ranges(std::uint64_t count, unsigned threads, Body&& body) {
  threads = std::max(1U, threads);
  if (threads == 1 || count < 2 * threads) {
    body(0, count, 0U);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t b = std::min(count, w * chunk);
    const std::uint64_t e = std::min(count, b + chunk);
    pool.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
  for (auto& th : pool) th.join();
}

inline void fill_table(RingTables& t, unsigned threads, auto&& per_element) {
  const std::uint64_t count = t.ring.element_count();
  t.table.assign(count, 0);
  parallel_ranges(count, threads, [&](std::uint64_t b, std::uint64_t e, unsigned) {
    for (std::uint64_t i = b; i < e; ++i) t.table[i] = per_element(packed_from_index(t.ring, i));
  });
}

// Elements to examine: every index, or a fixed pseudo-random sample.
struct ElementSource {
  std::uint64_t count = 0;
  bool sampled = false;
  std::uint64_t seed = 0;
  std::uint64_t universe = 0;

  std::uint64_t at(std::uint64_t i) const {
    return sampled ? intmath::splitmix64(seed ^ intmath::splitmix64(i)) % universe : i;
  }
};

inline ElementSource element_source(const RingSpec& ring, const CertifyOptions& opts) {
  ElementSource src;
  src.universe = ring.element_count();
  if (opts.samples) {
    src.sampled = true;
    src.count = *opts.samples;
    src.seed = opts.seed;
  } else {
    if (ring.element_bits() > kExhaustiveBits)
      throw BudgetError(ring.name() + " is too large for exhaustive certification; pass a sample count");
    src.count = src.universe;
  }
  return src;
}

// Candidate idempotents for element a: all of them, or for triangular
// rings the ones whose diagonal makes a + e have the wanted diagonal.
inline const std::vector<std::uint32_t>* bucket(const RingTables& t, packed::Word a, std::uint64_t wanted_diag) {
  if (t.ring.kind == RingKind::Full) return nullptr;
  return &t.by_diagonal[(packed::diagonal_bits(a, t.ring.size) ^ wanted_diag) & low_mask(t.ring.size)];
}

template <class Fn>
void for_candidates(const RingTables& t, const std::vector<std::uint32_t>* b, Fn&& fn) {
  if (b == nullptr) {
    for (std::uint32_t i = 0; i < t.idem.size(); ++i)
      if (!fn(i)) return;
  } else {
    for (std::uint32_t i : *b)
      if (!fn(i)) return;
  }
}

}  // namespace detail

/// Flags for every m in 1..m_max at once. An element's mask collects the m
/// divisible by ord(a + e) over idempotents e; the ring's flags are the AND
/// of all masks, and each false flag keeps the first failing element.
inline TorsionCertificate torsion_clean_order(const RingSpec& ring, std::uint64_t m_max = 0,
                                              const CertifyOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (m_max == 0) m_max = default_m_max(ring);
  if (m_max > kMaxMmax) throw std::invalid_argument("m_max is limited to 64");
  const detail::ElementSource src = detail::element_source(ring, opts);
  detail::RingTables t = detail::make_tables(ring);
  const std::size_t n = ring.size;
  const auto cap = static_cast<unsigned>(m_max);
  if (ring.element_bits() <= kTableBits)
    detail::fill_table(t, opts.threads, [&](packed::Word a) { return packed::order_up_to(a, n, cap); });

  std::vector<std::uint64_t> divisible(m_max + 1, 0);  // bit m-1 set when o | m
  for (std::uint64_t o = 1; o <= m_max; ++o)
    for (std::uint64_t m = o; m <= m_max; m += o) divisible[o] |= std::uint64_t{1} << (m - 1);
  const std::uint64_t all = m_max == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_max) - 1;

  struct Partial {
    std::uint64_t flags;
    std::vector<std::optional<std::uint64_t>> witness;  // by m - 1, as draw position
  };
  const unsigned workers = std::max(1U, opts.threads);
  std::vector<Partial> parts(workers, Partial{all, std::vector<std::optional<std::uint64_t>>(m_max)});

  detail::parallel_ranges(src.count, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    Partial& p = parts[w];
    for (std::uint64_t i = b; i < e; ++i) {
      const std::uint64_t idx = src.at(i);
      const packed::Word a = detail::packed_from_index(ring, idx);
      std::uint64_t mask = 0;
      // Triangular units have an all-ones diagonal.
      const auto* bk = detail::bucket(t, a, low_mask(n));
      detail::for_candidates(t, bk, [&](std::uint32_t k) {
        const unsigned o = t.table.empty() ? packed::order_up_to(a ^ t.idem[k], n, cap)
                                           : t.table[idx ^ t.idem_index[k]];
        if (o != 0) mask |= divisible[o];
        return (mask & p.flags) != p.flags;
      });
      const std::uint64_t missing = p.flags & ~mask;
      for (std::uint64_t m = 1; m <= m_max; ++m)
        if ((missing >> (m - 1)) & 1U) p.witness[m - 1] = i;
      p.flags &= mask;
    }
  });

  TorsionCertificate cert;
  cert.ring = ring;
  cert.m_max = m_max;
  cert.element_count = src.universe;
  cert.idempotent_count = t.idem.size();
  cert.checked_count = src.count;
  cert.exhaustive = !src.sampled;
  std::uint64_t flags = all;
  for (const Partial& p : parts) flags &= p.flags;
  cert.almost_flags.resize(m_max);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    cert.almost_flags[m - 1] = ((flags >> (m - 1)) & 1U) != 0;
    if (cert.almost_flags[m - 1]) {
      if (!cert.minimal_m) cert.minimal_m = m;
      continue;
    }
    std::optional<std::uint64_t> first;
    for (const Partial& p : parts)
      if (p.witness[m - 1] && (!first || *p.witness[m - 1] < *first)) first = p.witness[m - 1];
    // Draw position equals ring index in exhaustive runs.
    if (first) cert.failing_witness.emplace(m, decode(ring, src.at(*first)));
  }
  cert.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

/// The first idempotent e (in index order) with (a + e)^m = I, if any.
inline std::optional<Mat> find_torsion_idempotent(const RingSpec& ring, const Mat& a, std::uint64_t m) {
  if (!ring.contains(a)) throw std::invalid_argument("element is not in " + ring.name());
  for (const Mat& e : cached_idempotents(ring))
    if ((a + e).pow(m).is_identity()) return e;
  return std::nullopt;
}

/// Whether every element is u + e with u^m = I, and a failing element when
/// not.
struct AlmostVerdict {
  bool holds = false;
  std::optional<Mat> witness;
  bool exhaustive = true;
};

inline AlmostVerdict is_almost_m_torsion_clean(const RingSpec& ring, std::uint64_t m, const CertifyOptions& opts = {}) {
  if (m == 0 || m > kMaxMmax) throw std::invalid_argument("m must be in 1..64");
  const TorsionCertificate c = torsion_clean_order(ring, m, opts);
  AlmostVerdict v;
  v.holds = c.flag(m);
  v.exhaustive = c.exhaustive;
  if (auto it = c.failing_witness.find(m); it != c.failing_witness.end()) v.witness = it->second;
  return v;
}

/// Least 2^(t+1) with 2^t < n <= 2^(t+1).
inline std::uint64_t tn_predicted_order(std::uint64_t n) {
  if (n <= 2) throw std::invalid_argument("tn_predicted_order needs n > 2");
  return std::bit_ceil(n);
}

/// T_n is almost m-torsion clean exactly when n <= k1(m).
inline bool tn_almost_predicate(std::uint64_t n, std::uint64_t m) {
  if (n <= 2 || m <= 2) throw std::invalid_argument("tn_almost_predicate needs n > 2 and m > 2");
  return n <= k1(m);
}

struct NilIndexResult {
  std::size_t index = 0;
  Mat witness;  // an element attaining the index
  bool exhaustive = true;
  std::uint64_t checked_count = 0;
};

/// Least k such that every element is e + N with N^k = O: the maximum over
/// elements of the least nilpotency index over idempotents.
inline NilIndexResult nil_clean_index(const RingSpec& ring, const CertifyOptions& opts = {}) {
  const detail::ElementSource src = detail::element_source(ring, opts);
  detail::RingTables t = detail::make_tables(ring);
  const std::size_t n = ring.size;
  if (ring.element_bits() <= kTableBits)
    detail::fill_table(t, opts.threads, [&](packed::Word a) { return packed::nil_index(a, n); });

  struct Partial {
    unsigned best = 0;
    std::uint64_t at = 0;
    std::optional<std::uint64_t> stranded;  // element with no witness at all
  };
  const unsigned workers = std::max(1U, opts.threads);
  std::vector<Partial> parts(workers);

  detail::parallel_ranges(src.count, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    Partial& p = parts[w];
    for (std::uint64_t i = b; i < e; ++i) {
      const std::uint64_t idx = src.at(i);
      const packed::Word a = detail::packed_from_index(ring, idx);
      unsigned low = 0;
      // Triangular nilpotents have a zero diagonal.
      const auto* bk = detail::bucket(t, a, 0);
      detail::for_candidates(t, bk, [&](std::uint32_t k) {
        const unsigned v = t.table.empty() ? packed::nil_index(a ^ t.idem[k], n) : t.table[idx ^ t.idem_index[k]];
        if (v != 0 && (low == 0 || v < low)) low = v;
        // Stop once this element cannot raise the running maximum.
        return low == 0 || low > p.best;
      });
      if (low == 0) {
        p.stranded = idx;
        return;
      }
      if (low > p.best) {
        p.best = low;
        p.at = i;
      }
    }
  });
  for (const Partial& p : parts)
    if (p.stranded)
      throw std::logic_error("element " + decode(ring, *p.stranded).to_compact() + " has no nil-clean decomposition");

  NilIndexResult r;
  const Partial* best = &parts[0];
  for (const Partial& p : parts)
    if (p.best > best->best || (p.best == best->best && p.at < best->at)) best = &p;
  r.index = best->best;
  r.witness = decode(ring, src.at(best->at));
  r.exhaustive = !src.sampled;
  r.checked_count = src.count;
  return r;
}

}  // namespace tc
