#pragma once

// Companion matrices, polynomial evaluation, per-vector annihilators and the
// minimal polynomial.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tc/mat.hpp"
#include "tc/poly.hpp"

namespace tc {

/// Companion matrix of a monic q = X^s + c_{s-1} X^{s-1} + ... + c_0:
/// ones on the subdiagonal, last column (c_0, ..., c_{s-1}).
inline Mat companion(const Poly& q) {
  if (q.is_zero() || q.deg() == 0) throw std::invalid_argument("companion: degree must be >= 1");
  const std::size_t s = q.deg();
  if (s > Mat::kMaxDim) throw std::invalid_argument("companion: degree exceeds 64");
  Mat c(s);
  for (std::size_t i = 0; i + 1 < s; ++i) c.set(i + 1, i, true);
  for (std::size_t i = 0; i < s; ++i) c.set(i, s - 1, q.coeff(i));
  return c;
}

/// p(A) by Horner's rule.
inline Mat evaluate(const Poly& p, const Mat& a) {
  const std::size_t n = a.size();
  Mat acc(n);
  if (p.is_zero()) return acc;
  const Mat id = Mat::identity(n);
  for (std::size_t i = p.deg() + 1; i-- > 0;) {
    acc *= a;
    if (p.coeff(i)) acc += id;
  }
  return acc;
}

/// p(A) v, without forming p(A).
inline BitVec evaluate_on(const Poly& p, const Mat& a, BitVec v) {
  if (p.is_zero()) return 0;
  BitVec acc = 0;
  for (std::size_t i = p.deg() + 1; i-- > 0;) {
    acc = a.apply(acc);
    if (p.coeff(i)) acc ^= v;
  }
  return acc;
}

/// v, Av, ..., A^(d-1) v.
inline std::vector<BitVec> krylov_vectors(const Mat& a, BitVec v, std::size_t d) {
  std::vector<BitVec> out;
  out.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.push_back(v);
    v = a.apply(v);
  }
  return out;
}

/// Monic annihilator of v under A: the least-degree f with f(A) v = 0. Found
/// as the first linear dependence in the Krylov sequence v, Av, A^2 v, ...
inline Poly annihilator(const Mat& a, BitVec v) {
  struct Entry {
    BitVec vec;
    BitVec pivot;
    Poly comb;
  };
  std::vector<Entry> basis;
  BitVec power = v;
  for (std::size_t k = 0;; ++k) {
    BitVec w = power;
    Poly comb = Poly::monomial(k);
    for (const Entry& e : basis) {
      if (w & e.pivot) {
        w ^= e.vec;
        comb += e.comb;
      }
    }
    if (w == 0) return comb;
    basis.push_back({w, w & (~w + 1), std::move(comb)});
    power = a.apply(power);
  }
}

/// Minimal polynomial: lcm of the annihilators of the standard basis.
inline Poly minpoly(const Mat& a) {
  Poly m = Poly::one();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const BitVec e = BitVec{1} << j;
    if (evaluate_on(m, a, e) == 0) continue;
    m = lcm(m, annihilator(a, e));
  }
  return m;
}

}  // namespace tc
