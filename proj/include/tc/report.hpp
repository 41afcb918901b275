#pragma once

// JSON serialization of results. Matrices use the text format with rows
// joined by '/', polynomials their human form plus the coefficient bits.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tc/canon.hpp"
#include "tc/certify.hpp"
#include "tc/decomp.hpp"
#include "tc/numtheory.hpp"
#include "tc/poly.hpp"

namespace tc::report {

using nlohmann::json;

inline json poly(const Poly& p) {
  json j;
  j["poly"] = p.to_string();
  j["bits"] = p.to_bitstring();
  j["degree"] = p.is_zero() ? json(nullptr) : json(p.deg());
  return j;
}

inline json mat(const Mat& m) { return m.to_compact(); }

inline json factors(const Poly& input, const FactorMultiset& fm) {
  json j;
  j["input"] = poly(input);
  j["factors"] = json::array();
  for (const auto& [p, e] : fm.factors) {
    json f = poly(p);
    f["multiplicity"] = e;
    j["factors"].push_back(f);
  }
  return j;
}

inline json degrees(std::uint64_t n, const std::vector<std::size_t>& degs) {
  json j;
  j["n"] = n;
  j["degrees"] = degs;
  json counts = json::object();
  for (std::size_t d : degs) {
    const std::string key = std::to_string(d);
    counts[key] = counts.value(key, 0) + 1;
  }
  j["multiset"] = counts;
  return j;
}

inline json practical(const PracticalityWitness& w) {
  json j;
  j["p"] = w.p;
  j["n"] = w.n;
  j["practical"] = w.practical;
  j["missing_m"] = w.missing_m ? json(*w.missing_m) : json(nullptr);
  j["items"] = json::array();
  for (const auto& it : w.items) j["items"].push_back({{"d", it.d}, {"weight", it.weight}, {"capacity", it.capacity}});
  j["representation"] = w.representation;
  return j;
}

inline json frobenius(const Mat& a, const FrobeniusForm& f) {
  json j;
  j["input"] = mat(a);
  j["invariant_factors"] = json::array();
  for (const Poly& q : f.invariant_factors) j["invariant_factors"].push_back(poly(q));
  j["block_sizes"] = f.block_sizes();
  j["blocks"] = mat(f.blocks);
  j["transform"] = mat(f.transform);
  return j;
}

inline json checklist(const Checklist& c) {
  json arr = json::array();
  for (const auto& [name, ok] : c) arr.push_back({{"check", name}, {"passed", ok}});
  return arr;
}

inline json torsion(const Mat& a, const TorsionDecomposition& d) {
  json j;
  j["input"] = mat(a);
  j["e"] = mat(d.e);
  j["u"] = mat(d.u);
  j["exponent"] = d.exponent;
  j["unit_order"] = d.unit_order;
  j["idempotent_rank"] = d.idempotent_rank;
  j["strategy"] = d.strategy;
  j["blocks"] = json::array();
  for (const BlockRecord& b : d.blocks) {
    j["blocks"].push_back({{"q", poly(b.q)},
                           {"r", poly(b.r)},
                           {"strategy", b.strategy},
                           {"idempotent_rank", b.idempotent_rank}});
  }
  j["verification"] = checklist(verify_decomposition(a, d));
  return j;
}

inline json nil_clean(const Mat& a, const NilCleanDecomposition& d) {
  json j;
  j["input"] = mat(a);
  j["e"] = mat(d.e);
  j["nil"] = mat(d.nil);
  j["nil_index"] = d.nil_index;
  j["strategy"] = d.strategy;
  j["verification"] = checklist(verify_decomposition(a, d));
  return j;
}

inline json ring(const RingSpec& r) {
  return {{"kind", r.kind == RingKind::Full ? "full" : "upper-triangular"}, {"size", r.size}, {"name", r.name()}};
}

/// Certificate without timing; callers add "wall_time" when wanted so that
/// default output is byte-reproducible.
inline json certificate(const TorsionCertificate& c) {
  json j;
  j["ring"] = ring(c.ring);
  j["m_max"] = c.m_max;
  json flags = json::object();
  for (std::uint64_t m = 1; m <= c.m_max; ++m) flags[std::to_string(m)] = c.flag(m);
  j["almost_flags"] = flags;
  j["minimal_m"] = c.minimal_m ? json(*c.minimal_m) : json(nullptr);
  json wit = json::object();
  for (const auto& [m, w] : c.failing_witness) wit[std::to_string(m)] = mat(w);
  j["failing_witness"] = wit;
  j["element_count"] = c.element_count;
  j["idempotent_count"] = c.idempotent_count;
  j["checked_count"] = c.checked_count;
  j["exhaustive"] = c.exhaustive;
  return j;
}

inline json nil_index(const NilIndexResult& r) {
  return {{"index", r.index}, {"witness", mat(r.witness)}, {"exhaustive", r.exhaustive}, {"checked_count", r.checked_count}};
}

inline json zn(std::uint64_t modulus, const ZnProfile& z) {
  return {{"modulus", modulus}, {"plain", z.plain}, {"weak", z.weak}};
}

}  // namespace tc::report
