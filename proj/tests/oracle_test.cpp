#include "rencontres/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "rencontres/sequences.hpp"

namespace rencontres {
namespace {

TEST(PermutationTest, ValidatesBijection) {
  EXPECT_NO_THROW(Permutation({2, 1, 4, 3}));
  EXPECT_NO_THROW(Permutation(std::vector<std::uint32_t>{}));
  EXPECT_THROW(Permutation({1, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({1, 3}), std::invalid_argument);
}

TEST(PermutationTest, OneLineText) {
  EXPECT_EQ(Permutation({2, 3, 1}).to_string(), "2 3 1");
  EXPECT_EQ(Permutation().to_string(), "");
  EXPECT_EQ(Permutation({3, 1, 2})(1), 3U);
}

TEST(FixedPointsTest, Examples) {
  EXPECT_EQ(count_fixed_points(Permutation::identity(4)), 4U);
  EXPECT_EQ(count_fixed_points(Permutation({2, 1, 4, 3})), 0U);
  EXPECT_EQ(count_fixed_points(Permutation({1, 3, 2})), 1U);
}

TEST(CensusTest, Examples) {
  EXPECT_EQ(enumerate_census(3).counts, (std::vector<std::uint64_t>{2, 3, 0, 1}));
  EXPECT_EQ(enumerate_census(0).counts, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(enumerate_census(4).counts, (std::vector<std::uint64_t>{9, 8, 6, 0, 1}));
}

TEST(CensusTest, Invariants) {
  for (std::size_t n = 0; n <= 9; ++n) {
    const auto census = enumerate_census(n);
    ASSERT_EQ(census.counts.size(), n + 1);
    std::uint64_t total = 0;
    for (auto c : census.counts) total += c;
    std::uint64_t n_factorial = 1;
    for (std::uint64_t i = 2; i <= n; ++i) n_factorial *= i;
    EXPECT_EQ(total, n_factorial) << n;
    EXPECT_EQ(census.counts[n], 1U);
    if (n >= 1) EXPECT_EQ(census.counts[n - 1], 0U);
  }
}

TEST(CensusTest, MatchesRencontresFormula) {
  SequenceCache cache;
  for (std::size_t n = 0; n <= 9; ++n) {
    const auto census = enumerate_census(n);
    for (std::size_t r = 0; r <= n; ++r) {
      EXPECT_EQ(BigNat(census.counts[r]), rencontres(cache, n, static_cast<std::int64_t>(r)))
          << "n=" << n << " r=" << r;
    }
  }
}

TEST(CensusTest, OrderAndWorkerIndependent) {
  for (std::size_t n = 0; n <= 9; ++n) {
    const auto lex = enumerate_census(n);
    EXPECT_EQ(enumerate_census(n, {.order = EnumerationOrder::heap}), lex) << n;
    EXPECT_EQ(enumerate_census(n, {.workers = 3}), lex) << n;
  }
}

TEST(CensusTest, HorizonRefusal) {
  try {
    enumerate_census(11);
    FAIL();
  } catch (const HorizonExceeded& e) {
    EXPECT_EQ(e.horizon(), 10U);
    EXPECT_EQ(e.requested(), 11U);
    EXPECT_NE(std::string(e.what()).find("10"), std::string::npos);
  }
  EXPECT_THROW(enumerate_census(5, {.horizon = 4}), HorizonExceeded);
  EXPECT_NO_THROW(enumerate_census(4, {.horizon = 4}));
}

TEST(BruteCountTest, Examples) {
  EXPECT_EQ(brute_derangement_count(2), BigNat(1));
  EXPECT_EQ(brute_derangement_count(4), BigNat(9));
  EXPECT_EQ(brute_derangement_count(5), BigNat(44));
  EXPECT_THROW(brute_derangement_count(12), HorizonExceeded);
}

TEST(SampleTest, UniqueDerangementOfTwo) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(sample_derangement(2, seed), Permutation({2, 1}));
  }
}

TEST(SampleTest, ThreeHasTwoChoicesAndIsReproducible) {
  const std::set<Permutation> allowed = {Permutation({2, 3, 1}), Permutation({3, 1, 2})};
  std::set<Permutation> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = sample_derangement(3, seed);
    EXPECT_TRUE(allowed.contains(p)) << p.to_string();
    EXPECT_EQ(sample_derangement(3, seed), p);
    seen.insert(p);
  }
  EXPECT_EQ(seen, allowed);
}

TEST(SampleTest, RejectsSmallN) {
  EXPECT_THROW(sample_derangement(1, 0), std::domain_error);
  EXPECT_THROW(sample_derangement(0, 0), std::domain_error);
}

TEST(SampleTest, AlwaysFixedPointFree) {
  std::mt19937_64 rng(99);
  for (std::size_t n = 2; n <= 40; ++n) {
    for (int i = 0; i < 50; ++i) {
      const auto p = sample_derangement(n, rng);
      ASSERT_EQ(p.size(), n);
      ASSERT_EQ(count_fixed_points(p), 0U);
    }
  }
}

// Every one of the 265 derangements of [6] appears with frequency within
// 5 binomial standard deviations of 1/265.
TEST(SampleTest, UniformOverDerangementsOfSix) {
  constexpr int kSamples = 100000;
  constexpr double p = 1.0 / 265.0;
  std::mt19937_64 rng(2026);
  std::map<Permutation, int> frequency;
  for (int i = 0; i < kSamples; ++i) ++frequency[sample_derangement(6, rng)];
  ASSERT_EQ(frequency.size(), 265U);
  const double mean = kSamples * p;
  const double sd = std::sqrt(kSamples * p * (1 - p));
  for (const auto& [perm, count] : frequency) {
    EXPECT_LT(std::abs(count - mean), 5 * sd) << perm.to_string() << " seen " << count;
  }
}

}  // namespace
}  // namespace rencontres
