// tc: command-line front end. One verb per library operation; text tables
// by default, JSON with --json. Output is a pure function of the arguments
// (wall time only appears with --timing).
//
// Exit status: 0 ok, 1 certification mismatch, 2 usage or budget error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tc/report.hpp"
#include "tc/tc.hpp"

namespace {

using nlohmann::json;
using namespace tc;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct Globals {
  std::uint64_t seed = 0x7c15eed;
  bool json_out = false;
  std::optional<std::uint64_t> budget;
  unsigned threads = 1;
  std::string out_path;
  bool timing = false;
};

struct Outcome {
  json result;
  std::string text;
  int status = kOk;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mat read_matrix(const std::string& path) {
  if (path.empty()) throw UsageError("--matrix <path> is required");
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read matrix file: " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return Mat::parse(text);
}

std::string indent(const std::string& block, const std::string& pad = "  ") {
  std::string out;
  std::istringstream in(block);
  for (std::string line; std::getline(in, line);) out += pad + line + "\n";
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string checklist_text(const Checklist& c) {
  std::string out = "verification:\n";
  for (const auto& [name, ok] : c) out += std::string("  [") + (ok ? "ok" : "FAIL") + "] " + name + "\n";
  out += std::string("all checks passed: ") + yes_no(all_passed(c)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Verbs

Outcome run_factor(const std::string& poly_text) {
  if (poly_text.empty()) throw UsageError("--poly is required");
  const Poly p = Poly::parse(poly_text);
  const FactorMultiset fm = factor(p);
  Outcome o;
  o.result = report::factors(p, fm);
  std::ostringstream s;
  s << p.to_string() << " =";
  for (const auto& [f, e] : fm.factors) {
    s << " (" << f.to_string() << ")";
    if (e > 1) s << "^" << e;
  }
  s << "\n";
  o.text = s.str();
  return o;
}

Outcome run_degrees(std::uint64_t n) {
  if (n == 0) throw UsageError("--n must be positive");
  const auto degs = xn_minus_1_degrees(n);
  Outcome o;
  o.result = report::degrees(n, degs);
  std::ostringstream s;
  s << "X^" << n << "-1 factor degrees:";
  for (const auto& [d, c] : o.result["multiset"].items()) s << " " << d << "x" << c.get<std::uint64_t>();
  s << "\n";
  o.text = s.str();
  return o;
}

Outcome run_practical(std::uint64_t p, std::uint64_t n) {
  const PracticalityWitness w = is_p_practical(p, n);
  Outcome o;
  o.result = report::practical(w);
  std::ostringstream s;
  s << p << "-practical: " << yes_no(w.practical) << "\n";
  if (w.missing_m) s << "first unrepresentable m: " << *w.missing_m << "\n";
  s << "d  l*_" << p << "(d)  capacity\n";
  for (const auto& it : w.items) s << it.d << "  " << it.weight << "  " << it.capacity << "\n";
  o.text = s.str();
  return o;
}

Outcome run_k1(std::uint64_t m) {
  if (m == 0) throw UsageError("m must be positive");
  Outcome o;
  const std::uint64_t k = k1(m);
  o.result = {{"m", m}, {"k1", k}, {"odd_count_row", odd_count_row(m)}};
  o.text = std::to_string(k) + "\n";
  return o;
}

Outcome run_order(std::uint64_t a, std::uint64_t n) {
  if (n == 0) throw UsageError("--n must be positive");
  const std::uint64_t c = coprime_part(a, n);
  const std::uint64_t l = l_star(a, n);
  Outcome o;
  o.result = {{"a", a}, {"n", n}, {"coprime_part", c}, {"order", l}};
  o.text = "l*_" + std::to_string(a) + "(" + std::to_string(n) + ") = " + std::to_string(l) + "\n";
  return o;
}

Outcome run_charpoly(const Mat& a) {
  const Poly cp = charpoly(a);
  const Poly mp = minpoly(a);
  const auto ord = unit_order(a);
  Outcome o;
  o.result = {{"input", report::mat(a)},
              {"charpoly", report::poly(cp)},
              {"minpoly", report::poly(mp)},
              {"unit_order", ord ? json(*ord) : json(nullptr)}};
  o.text = "charpoly: " + cp.to_string() + "\nminpoly: " + mp.to_string() +
           "\nunit order: " + (ord ? std::to_string(*ord) : std::string("none (singular)")) + "\n";
  return o;
}

Outcome run_frobenius(const Mat& a) {
  const FrobeniusForm f = frobenius_form(a);
  Outcome o;
  o.result = report::frobenius(a, f);
  std::string t = "invariant factors:";
  for (const Poly& q : f.invariant_factors) t += " " + q.to_string();
  t += "\nblocks:\n" + indent(f.blocks.to_text()) + "transform P (A = P B P^-1):\n" + indent(f.transform.to_text());
  o.text = t;
  return o;
}

Outcome run_decompose(const Mat& a, std::uint64_t n, const Globals& g) {
  if (n == 0) throw UsageError("--n must be positive");
  DecompOptions opts;
  opts.seed = g.seed;
  if (g.budget) opts.budget = *g.budget;
  Outcome o;
  try {
    const TorsionDecomposition d = almost_torsion_decompose(a, n, opts);
    const Checklist c = verify_decomposition(a, d);
    o.result = report::torsion(a, d);
    std::ostringstream s;
    s << "A:\n" << indent(a.to_text()) << "E (rank " << d.idempotent_rank << "):\n" << indent(d.e.to_text())
      << "U:\n" << indent(d.u.to_text()) << "exponent: " << d.exponent << "\nunit order: " << d.unit_order
      << "\nstrategy: " << d.strategy << "\nblocks:\n";
    for (const BlockRecord& b : d.blocks)
      s << "  q = " << b.q.to_string() << "  r = " << b.r.to_string() << "  rank " << b.idempotent_rank << "  "
        << b.strategy << "\n";
    s << checklist_text(c);
    o.text = s.str();
    o.status = all_passed(c) ? kOk : kMismatch;
  } catch (const DecompositionError& e) {
    if (e.kind() == DecompositionError::Kind::SearchFailed) throw BudgetError(e.what());
    o.result = {{"input", report::mat(a)},
                {"exponent", n},
                {"failure", {{"kind", "no-divisor"}, {"block_degree", e.block_degree()}, {"message", e.what()}}}};
    o.text = std::string("no decomposition constructed: ") + e.what() + "\n";
    o.status = kMismatch;
  }
  return o;
}

Outcome run_nilclean(const Mat& a, const Globals& g) {
  DecompOptions opts;
  opts.seed = g.seed;
  if (g.budget) opts.budget = *g.budget;
  const NilCleanDecomposition d = nil_clean_decompose(a, opts);
  const Checklist c = verify_decomposition(a, d);
  Outcome o;
  o.result = report::nil_clean(a, d);
  o.text = "A:\n" + indent(a.to_text()) + "E:\n" + indent(d.e.to_text()) + "N:\n" + indent(d.nil.to_text()) +
           "nilpotency index: " + std::to_string(d.nil_index) + "\nstrategy: " + d.strategy + "\n" +
           checklist_text(c);
  o.status = all_passed(c) ? kOk : kMismatch;
  return o;
}

struct Prediction {
  std::string claim;
  json expected;
  json observed;
  bool passed;
};

// Predictions checked against a certificate. Sampled flags are one-sided:
// false is a real counterexample, true only means none was drawn.
std::vector<Prediction> certify_predictions(const TorsionCertificate& c) {
  std::vector<Prediction> out;
  const std::uint64_t n = c.ring.size;
  auto flag_claim = [&](std::uint64_t m, bool expected) {
    if (m > c.m_max) return;
    if (!c.exhaustive && !expected) return;
    out.push_back({"almost " + std::to_string(m) + "-torsion clean", expected, c.flag(m), c.flag(m) == expected});
  };
  const json minimal = c.minimal_m ? json(*c.minimal_m) : json(nullptr);
  if (c.ring.kind == RingKind::UpperTriangular && n > 2) {
    const std::uint64_t pred = tn_predicted_order(n);
    if (c.exhaustive && pred <= c.m_max) out.push_back({"minimal order", pred, minimal, c.minimal_m == pred});
    for (std::uint64_t m = 3; m <= c.m_max; ++m) flag_claim(m, tn_almost_predicate(n, m));
  } else if (c.ring.kind == RingKind::Full && n >= 2) {
    if (c.exhaustive && n <= 4 && c.m_max >= 4) {
      const bool ok = c.minimal_m && *c.minimal_m >= 2 && *c.minimal_m <= 4;
      out.push_back({"minimal order in {2,3,4}", json::array({2, 3, 4}), minimal, ok});
    }
    if (is_p_practical(2, n).practical) flag_claim(n, true);
  }
  return out;
}

Outcome run_certify(const std::string& kind, std::size_t size, std::uint64_t m_max, std::optional<std::uint64_t> samples,
                    bool with_nil, const Globals& g) {
  RingSpec ring{};
  if (kind == "M" || kind == "F" || kind == "full") {
    ring.kind = RingKind::Full;
  } else if (kind == "T" || kind == "upper-triangular") {
    ring.kind = RingKind::UpperTriangular;
  } else {
    throw UsageError("--ring must be M (full) or T (upper triangular)");
  }
  if (size == 0) throw UsageError("--size is required");
  ring.size = size;
  CertifyOptions opts;
  opts.threads = std::max(1U, g.threads);
  opts.samples = samples;
  opts.seed = g.seed;

  const auto t0 = std::chrono::steady_clock::now();
  const TorsionCertificate c = torsion_clean_order(ring, m_max, opts);
  std::optional<NilIndexResult> nil;
  if (with_nil) nil = nil_clean_index(ring, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto preds = certify_predictions(c);
  const bool all_ok = std::all_of(preds.begin(), preds.end(), [](const Prediction& p) { return p.passed; });

  Outcome o;
  o.result = report::certificate(c);
  if (!c.exhaustive) o.result["samples"] = c.checked_count;
  if (nil) o.result["nil_clean_index"] = report::nil_index(*nil);
  o.result["predictions"] = json::array();
  for (const Prediction& p : preds)
    o.result["predictions"].push_back(
        {{"claim", p.claim}, {"expected", p.expected}, {"observed", p.observed}, {"passed", p.passed}});
  if (g.timing) o.result["wall_time"] = secs;

  std::ostringstream s;
  s << "ring: " << ring.name() << "  elements: " << c.element_count << "  idempotents: " << c.idempotent_count
    << "  checked: " << c.checked_count << (c.exhaustive ? "  (exhaustive)" : "  (sampled, one-sided)") << "\n";
  s << "m    almost  torsion-clean  failing witness\n";
  for (std::uint64_t m = 1; m <= c.m_max; ++m) {
    s << std::left << std::setw(5) << m << std::setw(8) << yes_no(c.flag(m)) << std::setw(15)
      << yes_no(c.torsion_clean(m));
    if (auto it = c.failing_witness.find(m); it != c.failing_witness.end()) s << it->second.to_compact();
    s << "\n";
  }
  s << "minimal_m: " << (c.minimal_m ? std::to_string(*c.minimal_m) : std::string("none")) << "\n";
  if (nil) s << "nil-clean index: " << nil->index << "  witness " << nil->witness.to_compact() << "\n";
  for (const Prediction& p : preds)
    s << "prediction " << p.claim << ": expected " << p.expected.dump() << ", observed " << p.observed.dump()
      << (p.passed ? "  ok" : "  MISMATCH") << "\n";
  if (g.timing) s << "wall time: " << std::fixed << std::setprecision(3) << secs << " s\n";
  o.text = s.str();
  o.status = all_ok ? kOk : kMismatch;
  return o;
}

Outcome run_tn_predict(std::uint64_t n, std::uint64_t m_max) {
  if (n <= 2) throw UsageError("--n must exceed 2");
  if (m_max < 3) throw UsageError("--mmax must be at least 3");
  Outcome o;
  const std::uint64_t pred = tn_predicted_order(n);
  json flags = json::object();
  std::ostringstream s;
  s << "predicted minimal order of T" << n << ": " << pred << "\nm    k1(m)  almost\n";
  for (std::uint64_t m = 3; m <= m_max; ++m) {
    const bool f = tn_almost_predicate(n, m);
    flags[std::to_string(m)] = f;
    s << std::left << std::setw(5) << m << std::setw(7) << k1(m) << yes_no(f) << "\n";
  }
  o.result = {{"n", n}, {"predicted_order", pred}, {"almost_flags", flags}};
  o.text = s.str();
  return o;
}

Outcome run_zn(std::uint64_t modulus) {
  const ZnProfile z = zn_torsion_profile(modulus);
  Outcome o;
  o.result = report::zn(modulus, z);
  o.text = "Z/" + std::to_string(modulus) + ": (" + std::to_string(z.plain) + ", " + std::to_string(z.weak) + ")\n";
  return o;
}

// ---------------------------------------------------------------------------

void emit(const Globals& g, const std::string& body) {
  std::cout << body;
  if (!g.out_path.empty()) {
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + g.out_path);
    f << body;
  }
}

json envelope(const std::string& verb, const Globals& g) {
  return {{"tool", "tc"}, {"format_version", 1}, {"verb", verb}, {"seed", g.seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GF(2) torsion-clean toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::string matrix_path;
  std::string poly_text;
  app.add_option("--seed", g.seed, "seed for randomized searches and sampling");
  app.add_flag("--json", g.json_out, "JSON output");
  app.add_option("--budget", g.budget, "random idempotent draws per block");
  app.add_option("--threads", g.threads, "worker threads for certify")->check(CLI::Range(1U, 256U));
  app.add_option("--out", g.out_path, "also write the report to this file");
  app.add_flag("--timing", g.timing, "include wall time (output no longer reproducible)");
  app.add_option("--matrix", matrix_path, "matrix file in text format, '-' for stdin");
  app.add_option("--poly", poly_text, "polynomial, e.g. X^3+X+1 or bits 1101 (constant term first)");

  std::uint64_t n = 0, p = 2, a = 2, m = 0, m_max = 0, modulus = 0;
  std::size_t size = 0;
  std::string ring_kind;
  std::optional<std::uint64_t> samples;
  bool with_nil = false;

  std::function<Outcome()> action;
  auto verb = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  verb("factor", "factor a polynomial over GF(2)")->callback([&] { action = [&] { return run_factor(poly_text); }; });

  auto* c_deg = verb("degrees", "degree multiset of the irreducible factors of X^n - 1");
  c_deg->add_option("--n", n)->required();
  c_deg->callback([&] { action = [&] { return run_degrees(n); }; });

  auto* c_pr = verb("practical", "p-practicality of n");
  c_pr->add_option("--p", p);
  c_pr->add_option("--n", n)->required();
  c_pr->callback([&] { action = [&] { return run_practical(p, n); }; });

  auto* c_k1 = verb("k1", "least k in 1..m with C(m, k) odd");
  c_k1->add_option("m", m)->required();
  c_k1->callback([&] { action = [&] { return run_k1(m); }; });

  auto* c_ord = verb("order", "l*_a(n): order of a modulo the part of n coprime to a");
  c_ord->add_option("--a", a);
  c_ord->add_option("--n", n)->required();
  c_ord->callback([&] { action = [&] { return run_order(a, n); }; });

  verb("charpoly", "characteristic and minimal polynomial, unit order")->callback([&] {
    action = [&] { return run_charpoly(read_matrix(matrix_path)); };
  });
  verb("frobenius", "rational canonical form with transform")->callback([&] {
    action = [&] { return run_frobenius(read_matrix(matrix_path)); };
  });

  auto* c_dec = verb("decompose", "A = E + U with E idempotent and U^n = I");
  c_dec->add_option("--n", n)->required();
  c_dec->callback([&] { action = [&] { return run_decompose(read_matrix(matrix_path), n, g); }; });

  verb("nilclean", "A = E + N with E idempotent and N nilpotent of least index")->callback([&] {
    action = [&] { return run_nilclean(read_matrix(matrix_path), g); };
  });

  auto* c_cert = verb("certify", "certify torsion-clean orders of a matrix ring");
  c_cert->add_option("--ring", ring_kind, "M (full) or T (upper triangular)")->required();
  c_cert->add_option("--size", size)->required()->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  c_cert->add_option("--mmax", m_max, "largest m (default 2*size+4, at most 64)");
  c_cert->add_option("--sample", samples, "sample this many elements instead of enumerating");
  c_cert->add_flag("--nil-index", with_nil, "also compute the nil-clean index");
  c_cert->callback([&] { action = [&] { return run_certify(ring_kind, size, m_max, samples, with_nil, g); }; });

  auto* c_tn = verb("tn-predict", "predicted orders and almost flags for T_n");
  c_tn->add_option("--n", n)->required();
  c_tn->add_option("--mmax", m_max, "last m of the flag table (default 16)");
  c_tn->callback([&] { action = [&] { return run_tn_predict(n, m_max == 0 ? 16 : m_max); }; });

  auto* c_zn = verb("zn", "torsion profile of Z/mZ");
  c_zn->add_option("modulus", modulus)->required();
  c_zn->callback([&] { action = [&] { return run_zn(modulus); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string verb_name = app.get_subcommands().front()->get_name();
  json env = envelope(verb_name, g);
  int status = kOk;
  std::string text;
  std::string error_kind;
  std::string error_msg;
  try {
    Outcome o = action();
    status = o.status;
    env["status"] = status == kOk ? "ok" : "mismatch";
    env["result"] = std::move(o.result);
    text = std::move(o.text);
  } catch (const BudgetError& e) {
    error_kind = "budget";
    error_msg = e.what();
  } catch (const UsageError& e) {
    error_kind = "usage";
    error_msg = e.what();
  } catch (const std::invalid_argument& e) {
    error_kind = "usage";
    error_msg = e.what();
  } catch (const std::exception& e) {
    error_kind = "internal";
    error_msg = e.what();
  }

  try {
    if (!error_kind.empty()) {
      std::cerr << "tc " << verb_name << ": " << error_msg << "\n";
      if (g.json_out) {
        env["status"] = "error";
        env["error"] = {{"kind", error_kind}, {"message", error_msg}};
        emit(g, env.dump(2) + "\n");
      }
      return kUsage;
    }
    emit(g, g.json_out ? env.dump(2) + "\n" : text);
  } catch (const std::exception& e) {
    std::cerr << "tc: " << e.what() << "\n";
    return kUsage;
  }
  return status;
}
