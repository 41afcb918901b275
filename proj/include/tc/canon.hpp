#pragma once

// Frobenius (rational canonical) normal form over GF(2) with an explicit
// similarity transform.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tc/krylov.hpp"
#include "tc/mat.hpp"
#include "tc/poly.hpp"

namespace tc {

/// A = transform * blocks * transform^-1, where blocks is the direct sum of
/// the companions of q_1 | q_2 | ... | q_t.
struct FrobeniusForm {
  std::vector<Poly> invariant_factors;
  Mat blocks;
  Mat transform;

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> out;
    for (const Poly& q : invariant_factors) out.push_back(q.deg());
    return out;
  }
};

namespace detail {

inline std::map<Poly, unsigned> factor_map(const Poly& f) {
  std::map<Poly, unsigned> out;
  if (f.deg() == 0) return out;
  for (auto& [p, e] : factor(f).factors) out.emplace(p, e);
  return out;
}

inline Poly prime_power(const Poly& p, unsigned e) {
  Poly out = Poly::one();
  for (unsigned i = 0; i < e; ++i) out *= p;
  return out;
}

// Given v with annihilator f and w with annihilator g, a vector whose
// annihilator is lcm(f, g). Each prime power of the lcm is taken from the
// side that carries it; the two pieces have coprime annihilators, so their
// sum is annihilated exactly by the product.
inline std::pair<BitVec, Poly> merge_cyclic(const Mat& a, BitVec v, const Poly& f, BitVec w, const Poly& g) {
  const auto ff = factor_map(f);
  const auto fg = factor_map(g);
  Poly f1 = Poly::one();
  Poly g1 = Poly::one();
  for (const auto& [p, e] : ff) {
    const auto it = fg.find(p);
    if (it == fg.end() || it->second <= e) f1 *= prime_power(p, e);
  }
  for (const auto& [p, e] : fg) {
    const auto it = ff.find(p);
    if (it == ff.end() || it->second < e) g1 *= prime_power(p, e);
  }
  const BitVec v1 = evaluate_on(f / f1, a, v);
  const BitVec w1 = evaluate_on(g / g1, a, w);
  return {v1 ^ w1, f1 * g1};
}

}  // namespace detail

/// Frobenius normal form by repeated cyclic-vector splitting. In each round
/// the current invariant subspace Z (initially the whole space) yields a
/// vector v whose annihilator f is the minimal polynomial of A on Z: start
/// from the basis vector of Z with the largest annihilator degree (lowest
/// index on ties) and merge in any basis vector whose annihilator does not
/// divide f. A functional phi with phi(A^i v) = [i = d-1] cuts out the
/// invariant complement {z in Z : phi(A^j z) = 0, j < d}, and the process
/// repeats on it. Factors come out largest first; a stable sort by degree
/// puts them in divisibility order and keeps equal factors in discovery order.
inline FrobeniusForm frobenius_form(const Mat& a) {
  const std::size_t n = a.size();
  std::vector<BitVec> space;
  for (std::size_t j = 0; j < n; ++j) space.push_back(BitVec{1} << j);

  std::vector<std::pair<Poly, std::vector<BitVec>>> found;
  while (!space.empty()) {
    std::vector<Poly> anns;
    anns.reserve(space.size());
    for (BitVec z : space) anns.push_back(annihilator(a, z));

    std::size_t start = 0;
    for (std::size_t j = 1; j < space.size(); ++j)
      if (anns[j].deg() > anns[start].deg()) start = j;

    BitVec v = space[start];
    Poly f = anns[start];
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j == start || divides(anns[j], f)) continue;
      std::tie(v, f) = detail::merge_cyclic(a, v, f, space[j], anns[j]);
    }

    const std::size_t d = f.deg();
    std::vector<BitVec> krylov = krylov_vectors(a, v, d);

    std::vector<bool> rhs(d, false);
    rhs[d - 1] = true;
    const auto phi = detail::solve(krylov, rhs, n);
    if (!phi) throw std::logic_error("frobenius_form: Krylov vectors are dependent");

    std::vector<BitVec> constraints;
    constraints.reserve(d);
    BitVec row = *phi;
    for (std::size_t j = 0; j < d; ++j) {
      BitVec g = 0;
      for (std::size_t k = 0; k < space.size(); ++k) g |= static_cast<BitVec>(parity(row & space[k])) << k;
      constraints.push_back(g);
      row = a.apply_left(row);
    }
    std::vector<BitVec> next;
    for (BitVec c : detail::kernel(constraints, space.size())) {
      BitVec z = 0;
      for (std::size_t k = 0; k < space.size(); ++k)
        if ((c >> k) & 1U) z ^= space[k];
      next.push_back(z);
    }
    if (next.size() + d != space.size()) throw std::logic_error("frobenius_form: complement has wrong dimension");

    found.emplace_back(std::move(f), std::move(krylov));
    space = std::move(next);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& x, const auto& y) { return x.first.deg() < y.first.deg(); });

  FrobeniusForm out;
  std::vector<BitVec> columns;
  std::vector<Mat> companions;
  for (auto& [q, basis] : found) {
    columns.insert(columns.end(), basis.begin(), basis.end());
    companions.push_back(companion(q));
    out.invariant_factors.push_back(std::move(q));
  }
  out.blocks = assemble_block_diagonal(companions);
  out.transform = from_columns(columns);
  return out;
}

/// Splitting of a companion matrix along the coprime prime-power parts of
/// its polynomial: companion(q) = transform * (+) companion(parts) * transform^-1.
struct PrimarySplit {
  std::vector<Poly> parts;
  Mat transform;
};

inline PrimarySplit primary_split(const Poly& q) {
  const Mat c = companion(q);
  PrimarySplit out;
  std::vector<BitVec> columns;
  for (const auto& [p, e] : detail::factor_map(q)) {
    Poly part = detail::prime_power(p, e);
    // e_0 is cyclic for the companion; (q / part)(C) e_0 has annihilator part.
    const BitVec w = evaluate_on(q / part, c, BitVec{1});
    const auto basis = krylov_vectors(c, w, part.deg());
    columns.insert(columns.end(), basis.begin(), basis.end());
    out.parts.push_back(std::move(part));
  }
  out.transform = from_columns(columns);
  return out;
}

}  // namespace tc
