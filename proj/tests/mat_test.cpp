#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tc/charpoly.hpp"
#include "tc/krylov.hpp"
#include "tc/mat.hpp"

namespace tc {
namespace {

Poly P(const char* s) { return Poly::parse(s); }

Mat random_mat(std::mt19937_64& rng, std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, rng() & low_mask(n));
  return m;
}

TEST(Mat, Arithmetic) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1U, 3U, 17U, 64U}) {
    const Mat a = random_mat(rng, n);
    EXPECT_TRUE((a + a).is_zero());
    EXPECT_EQ(Mat::identity(n) * a, a);
    EXPECT_EQ(a * Mat::identity(n), a);
    EXPECT_EQ(a - a, Mat::zero(n));
    EXPECT_EQ(a.transpose().transpose(), a);
    const Mat b = random_mat(rng, n);
    EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
  }
  EXPECT_EQ(companion(P("X^2+X+1")).pow(3), Mat::identity(2));
  const Mat c = companion(P("X^2+X+1"));
  EXPECT_EQ(c * c * c, Mat::identity(2));
  EXPECT_THROW(Mat::identity(2) + Mat::identity(3), std::invalid_argument);
  EXPECT_THROW(Mat::identity(2) * Mat::identity(3), std::invalid_argument);
  EXPECT_THROW(Mat(0), std::invalid_argument);
  EXPECT_THROW(Mat(65), std::invalid_argument);
}

TEST(Mat, PowMatchesRepeatedProduct) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Mat a = random_mat(rng, 6);
    Mat acc = Mat::identity(6);
    for (std::uint64_t e = 0; e < 20; ++e) {
      EXPECT_EQ(a.pow(e), acc);
      acc = acc * a;
    }
  }
}

TEST(Mat, ApplyConventions) {
  const Mat a = Mat::from_strings({"01", "00"});  // entry (0,1)
  EXPECT_TRUE(a.get(0, 1));
  EXPECT_EQ(a.apply(0b10), 0b01U);       // A e_1 = e_0
  EXPECT_EQ(a.apply_left(0b01), 0b10U);  // e_0^T A = e_1^T
}

TEST(Mat, TextRoundTrip) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1U, 5U, 12U}) {
    const Mat a = random_mat(rng, n);
    EXPECT_EQ(Mat::parse(a.to_text()), a);
    EXPECT_EQ(Mat::parse(a.to_compact()), a);
  }
  EXPECT_EQ(Mat::parse("10\n01\n"), Mat::identity(2));
  EXPECT_THROW(Mat::parse("10\n0\n"), std::invalid_argument);
  EXPECT_THROW(Mat::parse("12\n01\n"), std::invalid_argument);
  EXPECT_THROW(Mat::parse(""), std::invalid_argument);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Mat::zero(4)), 0U);
  EXPECT_EQ(rank(Mat::identity(7)), 7U);
  EXPECT_EQ(rank(Mat::from_strings({"11", "11"})), 1U);
}

TEST(Rank, MatchesSubsetSpanOracle) {
  // Rank is log2 of the number of distinct XORs of row subsets.
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 8;
    const Mat a = random_mat(rng, n);
    std::vector<bool> seen(std::size_t{1} << n, false);
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      BitVec v = 0;
      for (std::size_t i = 0; i < n; ++i)
        if ((s >> i) & 1U) v ^= a.row(i);
      if (!seen[v]) {
        seen[v] = true;
        ++count;
      }
    }
    EXPECT_EQ(std::size_t{1} << rank(a), count);
  }
}

TEST(Inverse, Examples) {
  EXPECT_EQ(inverse(Mat::identity(5)), Mat::identity(5));
  EXPECT_EQ(inverse(Mat::from_strings({"11", "11"})), std::nullopt);
  const Mat c = companion(P("X^2+X+1"));
  EXPECT_EQ(inverse(c), c * c);
}

TEST(Inverse, RandomVerified) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 64;
    const Mat a = random_mat(rng, n);
    const auto inv = inverse(a);
    EXPECT_EQ(inv.has_value(), rank(a) == n);
    if (inv) {
      EXPECT_TRUE((a * *inv).is_identity());
      EXPECT_TRUE((*inv * a).is_identity());
    }
  }
}

TEST(Predicates, Examples) {
  EXPECT_TRUE(is_idempotent(Mat::identity(3)));
  EXPECT_FALSE(is_nilpotent(Mat::identity(3)));
  EXPECT_EQ(nilpotency_index(Mat::identity(3)), std::nullopt);
  const Mat j = Mat::from_strings({"011", "001", "000"});
  EXPECT_TRUE(is_nilpotent(j));
  EXPECT_EQ(nilpotency_index(j), 3U);
  EXPECT_TRUE(is_idempotent(Mat::from_strings({"01", "01"})));
  EXPECT_EQ(nilpotency_index(Mat::zero(4)), 1U);
}

TEST(Predicates, ExhaustiveM3) {
  std::size_t idem = 0;
  std::size_t nil = 0;
  for (const Mat& a : oracle::all_matrices(3)) {
    idem += is_idempotent(a) ? 1 : 0;
    if (is_nilpotent(a)) {
      ++nil;
      const auto k = nilpotency_index(a);
      ASSERT_TRUE(k.has_value());
      EXPECT_TRUE(a.pow(*k).is_zero());
      EXPECT_FALSE(a.pow(*k - 1).is_zero());
    }
  }
  EXPECT_EQ(idem, oracle::gaussian_idempotent_count(3));
  // Nilpotent count in M_n(F_q) is q^(n^2 - n).
  EXPECT_EQ(nil, 64U);
}

TEST(Companion, Examples) {
  EXPECT_EQ(companion(P("X+1")), Mat::identity(1));
  EXPECT_EQ(companion(P("X^2+X+1")), Mat::from_strings({"01", "11"}));
  EXPECT_THROW(companion(Poly::one()), std::invalid_argument);
  EXPECT_THROW(companion(Poly::zero()), std::invalid_argument);
  EXPECT_TRUE(evaluate(P("X^3+X+1"), companion(P("X^3+X+1"))).is_zero());
}

TEST(Companion, CharpolyRoundTripAllDegreeUpTo8) {
  for (std::uint64_t bits = 2; bits < (1U << 9); ++bits) {
    const Poly q = Poly::from_bits(bits);
    const Mat c = companion(q);
    EXPECT_EQ(charpoly(c), q) << q.to_string();
    EXPECT_EQ(oracle::det_charpoly(c), q) << q.to_string();
    EXPECT_EQ(minpoly(c), q) << q.to_string();
  }
}

TEST(Charpoly, Examples) {
  EXPECT_EQ(charpoly(Mat::identity(2)), P("X^2+1"));
  EXPECT_EQ(minpoly(Mat::identity(2)), P("X+1"));
  EXPECT_EQ(charpoly(Mat::zero(3)), P("X^3"));
  EXPECT_EQ(minpoly(Mat::zero(3)), P("X"));
}

TEST(Charpoly, MatchesDeterminantAndCayleyHamilton) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng() % 8;
    const Mat a = random_mat(rng, n);
    const Poly chi = charpoly(a);
    const Poly mu = minpoly(a);
    EXPECT_EQ(chi, oracle::det_charpoly(a));
    EXPECT_EQ(chi.deg(), n);
    EXPECT_TRUE(divides(mu, chi));
    EXPECT_TRUE(evaluate(chi, a).is_zero());
    EXPECT_TRUE(evaluate(mu, a).is_zero());
    // Minimality: no proper divisor of mu with the same roots kills A.
    for (const auto& [p, e] : factor(mu).factors) EXPECT_FALSE(evaluate(mu / p, a).is_zero());
  }
}

TEST(UnitOrder, Examples) {
  EXPECT_EQ(unit_order(Mat::identity(5)), 1U);
  EXPECT_EQ(unit_order(companion(P("X^2+X+1"))), 3U);
  const Mat j = Mat::from_strings({"011", "001", "000"});
  EXPECT_EQ(unit_order(Mat::identity(3) + j), 4U);
  // I + (nilpotent Jordan block), built from the definition J e_i = e_{i-1}.
  Mat jordan(3);
  jordan.set(0, 1, true);
  jordan.set(1, 2, true);
  EXPECT_EQ(oracle::brute_unit_order(Mat::identity(3) + jordan, 100), 4U);
  EXPECT_EQ(unit_order(Mat::identity(3) + jordan), 4U);
  EXPECT_EQ(unit_order(Mat::from_strings({"11", "11"})), std::nullopt);
}

TEST(UnitOrder, ExhaustiveUpTo4) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const Mat& a : oracle::all_matrices(n)) {
      const auto e = unit_order(a);
      ASSERT_EQ(e.has_value(), is_invertible(a));
      if (e) {
        ASSERT_EQ(e, oracle::brute_unit_order(a, 1000));
      }
    }
  }
}

TEST(UnitOrder, RandomUpTo8) {
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 1000) {
    const std::size_t n = 1 + rng() % 8;
    const Mat a = random_mat(rng, n);
    if (!is_invertible(a)) continue;
    EXPECT_EQ(unit_order(a), oracle::brute_unit_order(a, 1U << 16));
    ++done;
  }
}

TEST(UnitOrder, LargeOrderWithoutProbing) {
  // Companion of a primitive degree-61 polynomial has order 2^61 - 1.
  EXPECT_EQ(unit_order(companion(P("X^61+X^5+X^2+X+1"))), (std::uint64_t{1} << 61) - 1);
}

TEST(BlockDiagonal, Examples) {
  const Mat c = companion(P("X^3+X+1"));
  const std::vector<Mat> one{c};
  EXPECT_EQ(assemble_block_diagonal(one), c);
  const std::vector<Mat> two{Mat::identity(1), Mat::identity(1)};
  EXPECT_EQ(assemble_block_diagonal(two), Mat::identity(2));
  const std::vector<std::size_t> bad{1, 1};
  EXPECT_THROW(split_block_diagonal(bad, Mat::identity(3)), std::invalid_argument);
  const std::vector<std::size_t> sizes{1, 1};
  EXPECT_THROW(split_block_diagonal(sizes, Mat::from_strings({"11", "01"})), std::invalid_argument);
}

TEST(BlockDiagonal, RoundTrip) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    std::vector<Mat> blocks;
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    while (total < 40) {
      const std::size_t s = 1 + rng() % 8;
      blocks.push_back(random_mat(rng, s));
      sizes.push_back(s);
      total += s;
    }
    const Mat m = assemble_block_diagonal(blocks);
    EXPECT_EQ(m.size(), total);
    EXPECT_EQ(split_block_diagonal(sizes, m), blocks);
  }
}

}  // namespace
}  // namespace tc
