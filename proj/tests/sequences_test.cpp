#include "rencontres/sequences.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "reference.hpp"
#include "rencontres/oracle.hpp"

namespace rencontres {
namespace {

// D_0..D_20, from exhaustive enumeration (n <= 9) and an exact rational
// inclusion-exclusion sum.
const std::vector<std::string> kDerangements = {
    "1",           "0",           "1",           "2",           "9",
    "44",          "265",         "1854",        "14833",       "133496",
    "1334961",     "14684570",    "176214841",   "2290792932",  "32071101049",
    "481066515734", "7697064251745", "130850092279664", "2355301661033953",
    "44750731559645106", "895014631192902121"};

const std::string kD100 =
    "34332795984163804765195977526776142032365783805375784983543400282685180793327632432791396429850"
    "988990237345920155783984828001486412574060553756854137069878601";

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("rencontres-seq-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

TEST(TwoTermTest, Examples) {
  SequenceCache cache;
  EXPECT_EQ(derangement_two_term(cache, 0), BigNat(1));
  EXPECT_EQ(derangement_two_term(cache, 1), BigNat(0));
  EXPECT_EQ(derangement_two_term(cache, 4), BigNat(9));
  EXPECT_EQ(derangement_two_term(cache, 6), BigNat(265));
}

TEST(AlternatingTest, Examples) {
  EXPECT_EQ(derangement_alternating(1), BigNat(0));
  EXPECT_EQ(derangement_alternating(5), BigNat(44));
  EXPECT_EQ(derangement_alternating(10), BigNat(1334961));
}

TEST(SubfactorialTest, Examples) {
  EXPECT_EQ(derangement_subfactorial(0), BigNat(1));
  EXPECT_EQ(derangement_subfactorial(3), BigNat(2));
  EXPECT_EQ(derangement_subfactorial(7), BigNat(1854));
}

TEST(TelescopedTest, Examples) {
  EXPECT_EQ(derangement_telescoped(2), BigNat(1));
  EXPECT_EQ(derangement_telescoped(4), BigNat(9));
  EXPECT_EQ(derangement_telescoped(6), BigNat(265));
}

TEST(TelescopedTest, RejectsBelowTwo) {
  EXPECT_THROW(derangement_telescoped(0), std::domain_error);
  EXPECT_THROW(derangement_telescoped(1), std::domain_error);
}

// The expansion's terms are n!/k! for k = 2..n; the k = 0 and k = 1 terms
// of the subfactorial sum (n! and -n!) cancel, so nothing is lost.
TEST(TelescopedTest, TermGroupingAgainstSubfactorial) {
  for (std::size_t n = 2; n <= 12; ++n) {
    BigInt leading_pair = BigInt(factorial(n)) - BigInt(factorial_quotient(n, 1));
    EXPECT_EQ(leading_pair, BigInt(0));
    EXPECT_EQ(derangement_telescoped(n), derangement_subfactorial(n));
  }
}

TEST(DerangementTest, FrozenValues) {
  SequenceCache cache;
  for (std::size_t n = 0; n < kDerangements.size(); ++n) {
    const auto expected = BigNat::parse(kDerangements[n]);
    EXPECT_EQ(derangement_two_term(cache, n), expected) << n;
    EXPECT_EQ(derangement_alternating(n), expected) << n;
    EXPECT_EQ(derangement_subfactorial(n), expected) << n;
    if (n >= 2) EXPECT_EQ(derangement_telescoped(n), expected) << n;
  }
  EXPECT_EQ(cache.derangement(100).to_string(), kD100);
}

TEST(DerangementTest, CrossMethodToTwoHundred) {
  SequenceCache cache;
  const auto expected = reference::derangements(200);
  for (std::size_t n = 0; n <= 200; ++n) {
    const auto d = derangement_two_term(cache, n);
    ASSERT_EQ(d.to_string(), reference::str(expected[n])) << n;
    ASSERT_EQ(derangement_alternating(n), d) << n;
    ASSERT_EQ(derangement_subfactorial(n), d) << n;
    if (n >= 2) ASSERT_EQ(derangement_telescoped(n), d) << n;
  }
}

TEST(DerangementTest, MatchesEnumerationOracle) {
  SequenceCache cache;
  for (std::size_t n = 0; n <= 9; ++n) {
    const auto brute = brute_derangement_count(n);
    EXPECT_EQ(derangement_two_term(cache, n), brute) << n;
    EXPECT_EQ(derangement_alternating(n), brute) << n;
    EXPECT_EQ(derangement_subfactorial(n), brute) << n;
    if (n >= 2) EXPECT_EQ(derangement_telescoped(n), brute) << n;
  }
}

TEST(DerangementTest, MonotoneFromTwo) {
  SequenceCache cache;
  for (std::size_t n = 2; n < 200; ++n) EXPECT_GT(cache.derangement(n + 1), cache.derangement(n));
}

TEST(DerangementTest, AlternatingDifferenceAgainstRencontresOne) {
  SequenceCache cache;
  for (std::size_t n = 1; n <= 200; ++n) {
    BigInt diff = BigInt(cache.derangement(n)) - BigInt(rencontres(cache, n, 1));
    ASSERT_EQ(diff, BigInt(n % 2 == 0 ? 1 : -1)) << n;
  }
}

// |D_n/n! - 1/e| < 1/(n+1)!, with 1/e replaced by a series truncated well
// past depth n.
TEST(DerangementTest, ConvergenceToReciprocalE) {
  SequenceCache cache;
  for (std::size_t n = 1; n <= 30; ++n) {
    const ExactRatio ratio(BigInt(cache.derangement(n)), factorial(n));
    EXPECT_EQ(ratio, reciprocal_e_partial_sum(n)) << n;
    const ExactRatio gap = (ratio - reciprocal_e_partial_sum(n + 5)).abs();
    EXPECT_LT(gap, ExactRatio(BigInt(1), factorial(n + 1))) << n;
  }
}

TEST(RencontresTest, Examples) {
  SequenceCache cache;
  EXPECT_EQ(rencontres(cache, 4, 2), BigNat(6));
  for (std::size_t n = 0; n < 12; ++n) {
    EXPECT_EQ(rencontres(cache, n, static_cast<std::int64_t>(n)), BigNat(1));
  }
  EXPECT_EQ(rencontres(cache, 5, 1), BigNat(45));
  EXPECT_EQ(rencontres(cache, 3, 4), BigNat(0));
  EXPECT_EQ(rencontres(cache, 3, -1), BigNat(0));
}

TEST(RencontresTest, Rows) {
  SequenceCache cache;
  auto strings = [](const RencontresRow& row) {
    std::vector<std::string> out;
    for (const auto& v : row.values) out.push_back(v.to_string());
    return out;
  };
  EXPECT_EQ(strings(rencontres_row(cache, 0)), (std::vector<std::string>{"1"}));
  EXPECT_EQ(strings(rencontres_row(cache, 4)), (std::vector<std::string>{"9", "8", "6", "0", "1"}));
  EXPECT_EQ(strings(rencontres_row(cache, 3)), (std::vector<std::string>{"2", "3", "0", "1"}));
}

TEST(RencontresTest, RowInvariants) {
  SequenceCache cache;
  for (std::size_t n = 0; n <= 60; ++n) {
    const auto row = rencontres_row(cache, n);
    BigNat total(0);
    for (const auto& v : row.values) total += v;
    ASSERT_EQ(total, factorial(n)) << n;
    ASSERT_EQ(row.values[n], BigNat(1));
    if (n >= 1) ASSERT_EQ(row.values[n - 1], BigNat(0));
  }
}

TEST(RencontresTest, RowRejectsCorruptCache) {
  SequenceCache good;
  good.extend_to(8);
  auto values = good.values();
  values[4] = BigNat(8);
  auto bad = SequenceCache::from_values(values, CacheValidation::unchecked);
  EXPECT_THROW(rencontres_row(bad, 6), InternalConsistencyError);
}

TEST(ANumberTest, Examples) {
  SequenceCache cache;
  EXPECT_EQ(a_number(cache, 4), BigNat(3));
  EXPECT_EQ(a_number(cache, 6), BigNat(53));
  EXPECT_EQ(a_number(cache, 2), BigNat(1));
  EXPECT_THROW(a_number(cache, 1), std::domain_error);
}

TEST(ANumberTest, RecurrenceExamples) {
  SequenceCache cache;
  EXPECT_EQ(a_number_recurrence(cache, 3), BigNat(1));
  EXPECT_EQ(a_number_recurrence(cache, 4), BigNat(3));
  EXPECT_EQ(a_number_recurrence(cache, 6), BigNat(53));
}

TEST(ANumberTest, DivisibilityAndRecurrenceAgree) {
  SequenceCache cache;
  for (std::size_t n = 2; n <= 200; ++n) {
    ASSERT_TRUE(cache.derangement(n).divisible_by(BigNat(n - 1))) << n;
    ASSERT_EQ(a_number(cache, n), a_number_recurrence(cache, n)) << n;
  }
}

// |A_n| counts derangements with sigma(1) = 2; check by enumeration.
TEST(ANumberTest, MatchesDirectCount) {
  SequenceCache cache;
  for (std::uint32_t n = 2; n <= 8; ++n) {
    std::vector<std::uint32_t> images(n);
    for (std::uint32_t i = 0; i < n; ++i) images[i] = i + 1;
    std::uint64_t count = 0;
    do {
      if (images[0] == 2 && count_fixed_points(Permutation(images)) == 0) ++count;
    } while (std::next_permutation(images.begin(), images.end()));
    EXPECT_EQ(a_number(cache, n), BigNat(count)) << n;
  }
}

TEST(CacheTest, StartsWithSeeds) {
  SequenceCache cache;
  EXPECT_EQ(cache.size(), 2U);
  EXPECT_EQ(cache.derangement(0), BigNat(1));
  EXPECT_EQ(cache.derangement(1), BigNat(0));
  EXPECT_EQ(cache.source(0), CacheSource::seed);
  cache.extend_to(5);
  EXPECT_EQ(cache.size(), 6U);
  EXPECT_EQ(cache.source(5), CacheSource::two_term);
}

TEST(CacheTest, ConcurrentReadersSeeContiguousPrefix) {
  SequenceCache cache;
  const auto expected = reference::derangements(300);
  std::vector<bool> ok(6, true);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < ok.size(); ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t n = t; n <= 300; n += 3) {
          if (cache.derangement(n).to_string() != reference::str(expected[n])) ok[t] = false;
        }
      });
    }
  }
  for (bool b : ok) EXPECT_TRUE(b);
  EXPECT_FALSE(cache.first_inconsistency().has_value());
}

TEST(CacheTest, SaveLoadRoundTrip) {
  TempDir dir;
  SequenceCache cache;
  cache.extend_to(10);
  const auto file = dir.path() / "nested" / "d.cache";
  cache_save(cache, file);
  const auto loaded = cache_load(file);
  EXPECT_EQ(loaded, cache);
  EXPECT_EQ(loaded.size(), 11U);
  EXPECT_EQ(loaded.source(3), CacheSource::loaded);
}

TEST(CacheTest, FileFormat) {
  SequenceCache cache;
  cache.extend_to(4);
  std::ostringstream out;
  cache_write(cache, out);
  EXPECT_EQ(out.str(), "rencontres-kit-cache v1\nderangements 5\n1\n0\n1\n2\n9\n");
}

TEST(CacheTest, TamperedEntryFailsValidation) {
  std::istringstream in("rencontres-kit-cache v1\nderangements 5\n1\n0\n1\n2\n8\n");
  try {
    cache_read(in);
    FAIL() << "expected validation error";
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::validation);
    EXPECT_NE(std::string(e.what()).find("D_4"), std::string::npos);
  }
}

TEST(CacheTest, UncheckedLoadKeepsTamperedEntry) {
  std::istringstream in("rencontres-kit-cache v1\nderangements 5\n1\n0\n1\n2\n8\n");
  auto cache = cache_read(in, CacheValidation::unchecked);
  EXPECT_EQ(cache.derangement(4), BigNat(8));
  EXPECT_EQ(cache.first_inconsistency(), 4U);
}

TEST(CacheTest, ParseErrors) {
  auto kind_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      cache_read(in);
    } catch (const CacheError& e) {
      return e.kind();
    }
    return CacheError::Kind::missing;  // sentinel: no error
  };
  using K = CacheError::Kind;
  EXPECT_EQ(kind_of(""), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v2\nderangements 2\n1\n0\n"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 2\n1\n0"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 3\n1\n0\n"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 2\n1\n0 \n"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 2\n1\n0\n\n"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\ncount 2\n1\n0\n"), K::parse);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 1\n1\n"), K::validation);
  EXPECT_EQ(kind_of("rencontres-kit-cache v1\nderangements 2\n2\n0\n"), K::validation);
}

TEST(CacheTest, EmptyAndMissingFiles) {
  TempDir dir;
  const auto empty = dir.path() / "empty.cache";
  std::ofstream(empty).close();
  try {
    cache_load(empty);
    FAIL();
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::parse);
  }
  try {
    cache_load(dir.path() / "absent.cache");
    FAIL();
  } catch (const CacheError& e) {
    EXPECT_EQ(e.kind(), CacheError::Kind::missing);
  }
}

}  // namespace
}  // namespace rencontres
