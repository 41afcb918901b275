#pragma once

// Square matrices over GF(2), one machine word per row.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tc {

/// Column vector (or row vector) of length <= 64: bit i is coordinate i.
using BitVec = std::uint64_t;

inline bool parity(BitVec v) { return (std::popcount(v) & 1) != 0; }

inline constexpr BitVec low_mask(std::size_t n) { return n >= 64 ? ~BitVec{0} : (BitVec{1} << n) - 1; }

/// n x n matrix over GF(2), 1 <= n <= 64. Bit j of row i is entry (i, j);
/// columns >= n and rows >= n are always zero.
class Mat {
 public:
  static constexpr std::size_t kMaxDim = 64;

  Mat() = default;

  explicit Mat(std::size_t n) : n_(check_dim(n)) {}

  static Mat zero(std::size_t n) { return Mat(n); }

  static Mat identity(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i] = BitVec{1} << i;
    return m;
  }

  static Mat from_rows(std::span<const BitVec> rows) {
    Mat m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if ((rows[i] & ~low_mask(m.n_)) != 0) throw std::invalid_argument("row has bits beyond the dimension");
      m.rows_[i] = rows[i];
    }
    return m;
  }

  /// Rows given as '0'/'1' strings, first character is column 0.
  static Mat from_strings(std::initializer_list<std::string_view> rows) {
    Mat m(rows.size());
    std::size_t i = 0;
    for (std::string_view r : rows) m.rows_[i++] = parse_row(r, m.n_);
    return m;
  }

  std::size_t size() const { return n_; }

  bool get(std::size_t i, std::size_t j) const { return ((rows_[i] >> j) & 1U) != 0; }
  void set(std::size_t i, std::size_t j, bool v) {
    if (v) {
      rows_[i] |= BitVec{1} << j;
    } else {
      rows_[i] &= ~(BitVec{1} << j);
    }
  }

  BitVec row(std::size_t i) const { return rows_[i]; }
  void set_row(std::size_t i, BitVec r) { rows_[i] = r & low_mask(n_); }

  BitVec col(std::size_t j) const {
    BitVec c = 0;
    for (std::size_t i = 0; i < n_; ++i) c |= ((rows_[i] >> j) & 1U) << i;
    return c;
  }

  void set_col(std::size_t j, BitVec c) {
    for (std::size_t i = 0; i < n_; ++i) set(i, j, ((c >> i) & 1U) != 0);
  }

  /// A * v for a column vector v.
  BitVec apply(BitVec v) const {
    BitVec out = 0;
    for (std::size_t i = 0; i < n_; ++i) out |= static_cast<BitVec>(parity(rows_[i] & v)) << i;
    return out;
  }

  /// r * A for a row vector r.
  BitVec apply_left(BitVec r) const {
    BitVec out = 0;
    while (r != 0) {
      out ^= rows_[static_cast<std::size_t>(std::countr_zero(r))];
      r &= r - 1;
    }
    return out;
  }

  Mat& operator+=(const Mat& o) {
    check_same(o);
    for (std::size_t i = 0; i < n_; ++i) rows_[i] ^= o.rows_[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) { return *this += o; }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a += b; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    a.check_same(b);
    Mat out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) out.rows_[i] = b.apply_left(a.rows_[i]);
    return out;
  }
  Mat& operator*=(const Mat& o) { return *this = *this * o; }

  friend bool operator==(const Mat& a, const Mat& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i)
      if (a.rows_[i] != b.rows_[i]) return false;
    return true;
  }

  bool is_zero() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (rows_[i] != 0) return false;
    return true;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (rows_[i] != (BitVec{1} << i)) return false;
    return true;
  }

  Mat transpose() const {
    Mat t(n_);
    for (std::size_t i = 0; i < n_; ++i) t.rows_[i] = col(i);
    return t;
  }

  /// A^e by repeated squaring; A^0 = I.
  Mat pow(std::uint64_t e) const {
    Mat result = identity(n_);
    Mat base = *this;
    while (e != 0) {
      if (e & 1U) result *= base;
      e >>= 1;
      if (e != 0) base *= base;
    }
    return result;
  }

  bool trace() const {
    bool t = false;
    for (std::size_t i = 0; i < n_; ++i) t ^= get(i, i);
    return t;
  }

  BitVec diagonal() const {
    BitVec d = 0;
    for (std::size_t i = 0; i < n_; ++i) d |= static_cast<BitVec>(get(i, i)) << i;
    return d;
  }

  bool is_upper_triangular() const {
    for (std::size_t i = 1; i < n_; ++i)
      if ((rows_[i] & low_mask(i)) != 0) return false;
    return true;
  }

  /// n lines of n characters '0'/'1', each line newline-terminated.
  std::string to_text() const {
    std::string out;
    out.reserve(n_ * (n_ + 1));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out += get(i, j) ? '1' : '0';
      out += '\n';
    }
    return out;
  }

  /// Lines joined by '/', a compact single-line form for tables and JSON.
  std::string to_compact() const {
    std::string out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != 0) out += '/';
      for (std::size_t j = 0; j < n_; ++j) out += get(i, j) ? '1' : '0';
    }
    return out;
  }

  /// Parses the text format: n non-empty lines of n '0'/'1' characters.
  /// Blank lines and surrounding whitespace are ignored; '/' also separates
  /// rows so the compact form round-trips.
  static Mat parse(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) lines.push_back(cur);
      cur.clear();
    };
    for (char c : text) {
      if (c == '\n' || c == '/' || c == ';') {
        flush();
      } else if (c == '0' || c == '1') {
        cur += c;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        throw std::invalid_argument(std::string("unexpected character in matrix text: '") + c + "'");
      }
    }
    flush();
    if (lines.empty()) throw std::invalid_argument("empty matrix text");
    Mat m(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) m.rows_[i] = parse_row(lines[i], m.n_);
    return m;
  }

 private:
  static std::size_t check_dim(std::size_t n) {
    if (n == 0 || n > kMaxDim) throw std::invalid_argument("matrix dimension must be in 1..64");
    return n;
  }

  static BitVec parse_row(std::string_view r, std::size_t n) {
    if (r.size() != n) throw std::invalid_argument("matrix row length does not match dimension");
    BitVec v = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (r[j] == '1') {
        v |= BitVec{1} << j;
      } else if (r[j] != '0') {
        throw std::invalid_argument("matrix entries must be '0' or '1'");
      }
    }
    return v;
  }

  void check_same(const Mat& o) const {
    if (n_ != o.n_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t n_ = 0;
  std::array<BitVec, kMaxDim> rows_{};
};

// ---------------------------------------------------------------------------
// Row reduction

namespace detail {

/// Row-reduced echelon form of a list of row vectors, in place. Returns the
/// pivot column of each surviving row; zero rows are dropped.
inline std::vector<std::size_t> rref(std::vector<BitVec>& rows, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    const BitVec bit = BitVec{1} << c;
    std::size_t p = r;
    while (p < rows.size() && (rows[p] & bit) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && (rows[i] & bit) != 0) rows[i] ^= rows[r];
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

/// Basis of {x : row . x = 0 for every row}, over ncols coordinates.
inline std::vector<BitVec> kernel(std::vector<BitVec> rows, std::size_t ncols) {
  const auto pivots = rref(rows, ncols);
  BitVec pivot_mask = 0;
  for (std::size_t c : pivots) pivot_mask |= BitVec{1} << c;
  std::vector<BitVec> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if ((pivot_mask >> f) & 1U) continue;
    BitVec v = BitVec{1} << f;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((rows[i] >> f) & 1U) v |= BitVec{1} << pivots[i];
    basis.push_back(v);
  }
  return basis;
}

/// Some x with row_i . x = rhs_i for all i, or nullopt if inconsistent.
inline std::optional<BitVec> solve(std::vector<BitVec> rows, std::vector<bool> rhs, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    const BitVec bit = BitVec{1} << c;
    std::size_t p = r;
    while (p < rows.size() && (rows[p] & bit) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const bool t = rhs[r];
    rhs[r] = rhs[p];
    rhs[p] = t;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && (rows[i] & bit) != 0) {
        rows[i] ^= rows[r];
        rhs[i] = rhs[i] != rhs[r];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (rhs[i]) return std::nullopt;
  BitVec x = 0;
  for (std::size_t i = 0; i < r; ++i)
    if (rhs[i]) x |= BitVec{1} << pivots[i];
  return x;
}

}  // namespace detail

inline std::size_t rank(const Mat& a) {
  std::vector<BitVec> rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows[i] = a.row(i);
  return detail::rref(rows, a.size()).size();
}

/// Inverse by Gauss-Jordan, or nullopt when singular.
inline std::optional<Mat> inverse(const Mat& a) {
  const std::size_t n = a.size();
  Mat work = a;
  Mat inv = Mat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !work.get(p, c)) ++p;
    if (p == n) return std::nullopt;
    if (p != c) {
      const BitVec tw = work.row(p), ti = inv.row(p);
      work.set_row(p, work.row(c));
      inv.set_row(p, inv.row(c));
      work.set_row(c, tw);
      inv.set_row(c, ti);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i != c && work.get(i, c)) {
        work.set_row(i, work.row(i) ^ work.row(c));
        inv.set_row(i, inv.row(i) ^ inv.row(c));
      }
    }
  }
  return inv;
}

inline bool is_invertible(const Mat& a) { return rank(a) == a.size(); }

inline bool is_idempotent(const Mat& a) { return a * a == a; }

/// Least k >= 1 with A^k = O, or nullopt. Over a field k <= n suffices.
inline std::optional<std::size_t> nilpotency_index(const Mat& a) {
  Mat p = a;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    if (p.is_zero()) return k;
    p *= a;
  }
  return std::nullopt;
}

inline bool is_nilpotent(const Mat& a) { return a.pow(a.size()).is_zero(); }

/// Direct sum of square blocks along the diagonal.
inline Mat assemble_block_diagonal(std::span<const Mat> blocks) {
  std::size_t n = 0;
  for (const Mat& b : blocks) n += b.size();
  Mat out(n);
  std::size_t off = 0;
  for (const Mat& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) out.set_row(off + i, b.row(i) << off);
    off += b.size();
  }
  return out;
}

/// Inverse of assemble_block_diagonal. Throws if sizes do not sum to the
/// dimension or an off-block entry is nonzero.
inline std::vector<Mat> split_block_diagonal(std::span<const std::size_t> sizes, const Mat& m) {
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  if (total != m.size()) throw std::invalid_argument("block sizes do not sum to the dimension");
  std::vector<Mat> out;
  std::size_t off = 0;
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("block sizes must be positive");
    Mat b(s);
    const BitVec mask = low_mask(s) << off;
    for (std::size_t i = 0; i < s; ++i) {
      const BitVec r = m.row(off + i);
      if ((r & ~mask) != 0) throw std::invalid_argument("matrix is not block diagonal for these sizes");
      b.set_row(i, r >> off);
    }
    out.push_back(b);
    off += s;
  }
  return out;
}

/// Matrix whose columns are the given vectors.
inline Mat from_columns(std::span<const BitVec> cols) {
  Mat m(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

}  // namespace tc
