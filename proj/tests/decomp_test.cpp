#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tc/decomp.hpp"

namespace tc {
namespace {

Poly P(const char* s) { return Poly::parse(s); }

Mat random_mat(std::mt19937_64& rng, std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, rng() & low_mask(n));
  return m;
}

std::vector<Mat> brute_idempotents(std::size_t n) {
  std::vector<Mat> out;
  for (const Mat& a : oracle::all_matrices(n))
    if (a * a == a) out.push_back(a);
  return out;
}

// Test-side verification that does not reuse verify_decomposition.
void expect_valid(const Mat& a, const TorsionDecomposition& d, std::uint64_t n) {
  ASSERT_EQ(d.e * d.e, d.e);
  ASSERT_EQ(d.e + d.u, a);
  ASSERT_EQ(a + d.e, d.u);
  ASSERT_EQ(a + d.u, d.e);
  ASSERT_EQ(d.exponent, n);
  const auto ord = oracle::brute_unit_order(d.u, 1U << 16);
  ASSERT_TRUE(ord.has_value());
  ASSERT_EQ(*ord, d.unit_order);
  ASSERT_EQ(n % *ord, 0U);
  ASSERT_EQ(d.idempotent_rank, rank(d.e));
}

TEST(CompanionDecompose, TrivialCase) {
  const Mat c = companion(P("X^3+1"));
  const auto d = companion_torsion_decompose(c, 3, P("X^3+1"));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->e, Mat::zero(3));
  EXPECT_EQ(d->u, c);
  EXPECT_TRUE(d->u.pow(3).is_identity());
  EXPECT_EQ(d->strategy, "zero-idempotent");
}

TEST(CompanionDecompose, RejectsBadInput) {
  EXPECT_THROW(companion_torsion_decompose(companion(P("X^2+1")), 3, P("X^2+1")), std::invalid_argument);
  EXPECT_THROW(companion_torsion_decompose(Mat::identity(2), 3, P("X^2+X+1")), std::invalid_argument);
  EXPECT_THROW(companion_torsion_decompose(companion(P("X^2+1")), 3, P("X+1")), std::invalid_argument);
}

// For every companion of size s and every degree-s divisor r of X^n - 1,
// success must coincide with the existence of a suitable idempotent in a
// brute-force scan, and successes must satisfy charpoly(U) = r.
void check_against_scan(std::size_t s, std::uint64_t n) {
  const auto es = brute_idempotents(s);
  const Poly target = Poly::xn_minus_1(n);
  for (std::uint64_t bits = std::uint64_t{1} << s; bits < (std::uint64_t{1} << (s + 1)); ++bits) {
    const Poly q = Poly::from_bits(bits);
    const Mat c = companion(q);
    for (std::uint64_t rb = std::uint64_t{1} << s; rb < (std::uint64_t{1} << (s + 1)); ++rb) {
      const Poly r = Poly::from_bits(rb);
      if (!(target % r).is_zero()) continue;
      bool exists = false;
      for (const Mat& e : es) exists = exists || oracle::det_charpoly(c + e) == r;
      const auto d = companion_torsion_decompose(c, n, r);
      EXPECT_EQ(d.has_value(), exists) << q.to_string() << " / " << r.to_string();
      if (d) {
        expect_valid(c, *d, n);
        EXPECT_EQ(oracle::det_charpoly(d->u), r);
        // Trace bookkeeping: rank(E) = r_{s-1} + c_{s-1} mod 2.
        EXPECT_EQ(d->idempotent_rank % 2 == 1, r.coeff(s - 1) != q.coeff(s - 1));
      }
    }
  }
}

TEST(CompanionDecompose, SizeTwoOrderThreeAgainstScan) { check_against_scan(2, 3); }

TEST(CompanionDecompose, SizesUpTo4DivisorsOfX4MinusOne) {
  for (std::size_t s = 1; s <= 4; ++s) {
    check_against_scan(s, 4);
    // Success whenever some rank 1..s-1 has the required parity.
    Poly rs = Poly::one();
    for (std::size_t i = 0; i < s; ++i) rs *= P("X+1");
    for (std::uint64_t bits = std::uint64_t{1} << s; bits < (std::uint64_t{1} << (s + 1)); ++bits) {
      const Poly q = Poly::from_bits(bits);
      const bool parity = rs.coeff(s - 1) != q.coeff(s - 1);
      bool achievable = false;
      for (std::size_t k = 1; k < s; ++k) achievable = achievable || ((k % 2 == 1) == parity);
      if (achievable) {
        EXPECT_TRUE(companion_torsion_decompose(companion(q), 4, rs).has_value()) << q.to_string();
      }
    }
  }
}

TEST(CompanionDecompose, OtherExponentsAgainstScan) {
  for (std::uint64_t n : {6U, 7U, 12U, 15U}) {
    for (std::size_t s = 1; s <= 4; ++s) check_against_scan(s, n);
  }
}

TEST(CompanionDecompose, RankParityPropertyBySearch) {
  // For s in 2..4, every monic r of degree s and every rank k in 1..s-1
  // with k = r_{s-1} + c_{s-1} mod 2 is realized by some rank-k idempotent.
  for (std::size_t s = 2; s <= 4; ++s) {
    const auto es = brute_idempotents(s);
    for (std::uint64_t qb = std::uint64_t{1} << s; qb < (std::uint64_t{1} << (s + 1)); ++qb) {
      const Mat c = companion(Poly::from_bits(qb));
      for (std::uint64_t rb = std::uint64_t{1} << s; rb < (std::uint64_t{1} << (s + 1)); ++rb) {
        const Poly r = Poly::from_bits(rb);
        for (std::size_t k = 1; k < s; ++k) {
          if ((k % 2 == 1) != (r.coeff(s - 1) != c.get(s - 1, s - 1))) continue;
          bool found = false;
          for (const Mat& e : es) found = found || (rank(e) == k && charpoly(c + e) == r);
          EXPECT_TRUE(found) << s << " " << qb << " " << rb << " " << k;
        }
      }
    }
  }
}

TEST(CompanionDecompose, RandomSearchForLargerBlocks) {
  // Size 6..10 blocks go through random draws; X^n - 1 with n = 2^j makes
  // (X+1)^s the only choice, a stringent target.
  std::mt19937_64 rng(17);
  for (std::size_t s = 6; s <= 10; ++s) {
    Poly r = Poly::one();
    for (std::size_t i = 0; i < s; ++i) r *= P("X+1");
    for (int t = 0; t < 5; ++t) {
      const Poly q = Poly::from_bits((rng() & low_mask(s)) | (std::uint64_t{1} << s));
      const auto d = companion_torsion_decompose(companion(q), 16, r);
      ASSERT_TRUE(d.has_value()) << q.to_string();
      expect_valid(companion(q), *d, 16);
      EXPECT_EQ(charpoly(d->u), r);
    }
  }
}

TEST(AlmostDecompose, Examples) {
  const auto z = almost_torsion_decompose(Mat::zero(3), 3);
  EXPECT_EQ(z.e, Mat::identity(3));
  EXPECT_EQ(z.u, Mat::identity(3));
  expect_valid(Mat::zero(3), z, 3);

  const Mat c = companion(P("X^3+1"));
  const auto d = almost_torsion_decompose(c, 3);
  EXPECT_EQ(d.e, Mat::zero(3));
  EXPECT_EQ(d.u, c);
}

TEST(AlmostDecompose, ExhaustiveM3AndM4) {
  for (std::size_t n : {3U, 4U}) {
    for (const Mat& a : oracle::all_matrices(n)) {
      SCOPED_TRACE(a.to_compact());
      const auto d = almost_torsion_decompose(a, n);
      expect_valid(a, d, n);
      EXPECT_TRUE(all_passed(verify_decomposition(a, d)));
      if (HasFatalFailure()) return;
    }
  }
}

TEST(AlmostDecompose, RandomPracticalExponents) {
  std::mt19937_64 rng(23);
  for (std::size_t n : {6U, 8U}) {
    ASSERT_TRUE(is_p_practical(2, n).practical);
    for (int t = 0; t < 300; ++t) {
      const Mat a = random_mat(rng, n);
      const auto d = almost_torsion_decompose(a, n);
      expect_valid(a, d, n);
      if (HasFatalFailure()) return;
    }
  }
}

TEST(AlmostDecompose, CoprimeSplitFallback) {
  // X^2 + X = X (X + 1) with n = 3: the only degree-2 divisor of X^3 - 1 is
  // X^2 + X + 1, and no idempotent reaches it, so the block is split.
  const Mat c = companion(P("X^2+X"));
  EXPECT_FALSE(companion_torsion_decompose(c, 3, P("X^2+X+1")).has_value());
  const auto d = almost_torsion_decompose(c, 3);
  expect_valid(c, d, 3);
  ASSERT_EQ(d.blocks.size(), 1U);
  EXPECT_EQ(d.blocks[0].strategy, "primary-split");
}

TEST(AlmostDecompose, MissingDivisorReported) {
  // X^5 - 1 = (X+1)(X^4+X^3+X^2+X+1) has no degree-2 divisor.
  try {
    almost_torsion_decompose(companion(P("X^2+X+1")), 5);
    FAIL() << "expected DecompositionError";
  } catch (const DecompositionError& e) {
    EXPECT_EQ(e.kind(), DecompositionError::Kind::NoDivisor);
    EXPECT_EQ(e.block_degree(), 2U);
  }
}

TEST(AlmostDecompose, DeterministicForSeed) {
  std::mt19937_64 rng(29);
  const Mat a = random_mat(rng, 8);
  const auto d1 = almost_torsion_decompose(a, 8, {.seed = 5});
  const auto d2 = almost_torsion_decompose(a, 8, {.seed = 5});
  EXPECT_EQ(d1.e, d2.e);
}

TEST(AlmostDecompose, SomeInputNeedsProperRankIdempotent) {
  // Over M_3 with n = 3: inputs whose every witness has rank 0 or 3 form a
  // proper subset of the ring.
  const auto es = brute_idempotents(3);
  std::size_t only_trivial = 0;
  std::size_t total = 0;
  for (const Mat& a : oracle::all_matrices(3)) {
    bool any = false;
    bool proper = false;
    for (const Mat& e : es) {
      if (!(a + e).pow(3).is_identity()) continue;
      any = true;
      const std::size_t k = rank(e);
      proper = proper || (k != 0 && k != 3);
    }
    ASSERT_TRUE(any) << a.to_compact();
    if (!proper) ++only_trivial;
    ++total;
  }
  EXPECT_LT(only_trivial, total);
}

TEST(NilClean, Examples) {
  for (std::size_t n : {1U, 3U, 4U, 6U}) {
    const auto d = nil_clean_decompose(Mat::zero(n));
    EXPECT_EQ(d.nil_index, 1U);
    EXPECT_TRUE(d.nil.is_zero());
  }
  const Mat j = Mat::from_strings({"011", "001", "000"});
  const Mat a = Mat::identity(3) + j;
  const auto d = nil_clean_decompose(a);
  EXPECT_TRUE(all_passed(verify_decomposition(a, d)));
  EXPECT_EQ(d.e * d.e, d.e);
  EXPECT_TRUE((a + d.e).pow(3).is_zero());
}

TEST(NilClean, ExhaustiveM4IndexAtMost4) {
  const auto es = brute_idempotents(4);
  for (const Mat& a : oracle::all_matrices(4)) {
    const auto d = nil_clean_decompose(a);
    ASSERT_EQ(d.e * d.e, d.e);
    ASSERT_EQ(d.e + d.nil, a);
    ASSERT_LE(d.nil_index, 4U);
    ASSERT_TRUE(d.nil.pow(d.nil_index).is_zero());
  }
  // The minimal index is truly minimal for a sample of inputs.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const Mat a = random_mat(rng, 4);
    const auto d = nil_clean_decompose(a);
    for (const Mat& e : es)
      for (std::size_t k = 1; k < d.nil_index; ++k) ASSERT_FALSE((a + e).pow(k).is_zero());
  }
}

TEST(NilClean, RandomizedSizes5To8) {
  std::mt19937_64 rng(37);
  for (std::size_t n = 5; n <= 8; ++n) {
    for (int t = 0; t < 40; ++t) {
      const Mat a = random_mat(rng, n);
      const auto d = nil_clean_decompose(a);
      ASSERT_EQ(d.e * d.e, d.e);
      ASSERT_EQ(d.e + d.nil, a);
      ASSERT_TRUE(d.nil.pow(d.nil_index).is_zero());
    }
  }
  EXPECT_THROW(nil_clean_decompose(Mat::zero(11)), BudgetError);
}

// Least n by direct search over exponents 1..m with explicit powering.
std::pair<std::uint64_t, std::uint64_t> brute_zn(std::uint64_t m) {
  auto pw = [m](std::uint64_t b, std::uint64_t e) {
    std::uint64_t x = 1 % m;
    for (std::uint64_t i = 0; i < e; ++i) x = x * b % m;
    return x;
  };
  std::vector<std::uint64_t> idem;
  for (std::uint64_t e = 0; e < m; ++e)
    if (e * e % m == e) idem.push_back(e);
  std::uint64_t plain = 0;
  std::uint64_t weak = 0;
  for (std::uint64_t n = 1; n <= m && (plain == 0 || weak == 0); ++n) {
    bool p_ok = true;
    bool w_ok = true;
    for (std::uint64_t r = 0; r < m; ++r) {
      bool p = false;
      bool w = false;
      for (std::uint64_t e : idem) {
        const bool a = pw((r + m - e) % m, n) == 1 % m;
        const bool b = pw((r + e) % m, n) == 1 % m;
        p = p || a;
        w = w || a || b;
      }
      p_ok = p_ok && p;
      w_ok = w_ok && w;
    }
    if (p_ok && plain == 0) plain = n;
    if (w_ok && weak == 0) weak = n;
  }
  return {plain, weak};
}

TEST(Zn, Examples) {
  const auto z7 = zn_torsion_profile(7);
  EXPECT_EQ(z7.plain, 6U);
  EXPECT_EQ(z7.weak, 6U);
  const auto z8 = zn_torsion_profile(8);
  EXPECT_EQ(z8.plain, 2U);
  EXPECT_EQ(z8.weak, 2U);
  const auto z10 = zn_torsion_profile(10);
  EXPECT_EQ(z10.plain, 4U);
  EXPECT_EQ(z10.weak, 2U);
  EXPECT_THROW(zn_torsion_profile(1), std::invalid_argument);
  EXPECT_THROW(zn_torsion_profile(10001), std::invalid_argument);
}

TEST(Zn, MatchesDirectExponentSearch) {
  for (std::uint64_t m = 2; m <= 80; ++m) {
    const auto z = zn_torsion_profile(m);
    const auto [plain, weak] = brute_zn(m);
    EXPECT_EQ(z.plain, plain) << m;
    EXPECT_EQ(z.weak, weak) << m;
  }
}

TEST(Zn, LargeModulusIsFast) {
  // Prime modulus: 0 = -1 + 1 forces an even exponent dividing p - 1.
  const auto z = zn_torsion_profile(9973);
  EXPECT_EQ(z.plain % 2, 0U);
  EXPECT_EQ(9972 % z.plain, 0U);
  EXPECT_EQ(9972 % z.weak, 0U);
}

}  // namespace
}  // namespace tc
