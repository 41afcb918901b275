#pragma once

// Characteristic polynomial and unit order of GF(2) matrices.

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "tc/canon.hpp"
#include "tc/intmath.hpp"
#include "tc/krylov.hpp"
#include "tc/mat.hpp"
#include "tc/poly.hpp"

namespace tc {

/// Product of the invariant factors of the Frobenius form.
inline Poly charpoly(const Mat& a) {
  Poly out = Poly::one();
  for (const Poly& q : frobenius_form(a).invariant_factors) out *= q;
  return out;
}

/// Least e >= 1 with U^e = I, or nullopt when U is singular. Computed from
/// the minimal polynomial: lcm of the orders of its irreducible factors,
/// times 2^ceil(log2 of the largest multiplicity). One power check confirms.
inline std::optional<std::uint64_t> unit_order(const Mat& u) {
  if (!is_invertible(u)) return std::nullopt;
  const std::uint64_t e = poly_order(minpoly(u));
  if (!u.pow(e).is_identity()) throw std::logic_error("unit_order: verification power failed");
  return e;
}

}  // namespace tc
