#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

#include "rencontres/exact_arith.hpp"

namespace rencontres {

/// How a cache entry came to be.
enum class CacheSource : std::uint8_t { seed, two_term, loaded };

enum class CacheValidation {
  /// Reject any entry that breaks D_n = (n-1)(D_{n-1} + D_{n-2}).
  strict,
  /// Accept the values as given. Used for fault injection, so that the
  /// identity checkers rather than the loader get to find the damage.
  unchecked,
};

class CacheError : public std::runtime_error {
 public:
  enum class Kind { missing, io, parse, validation };

  CacheError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Memoized contiguous prefix D_0, D_1, ... of the derangement numbers,
/// extended with the two-term recurrence, plus a factorial prefix.
///
/// Many readers may query concurrently; extension takes an exclusive lock
/// and appends whole entries, so a reader never sees a partial prefix.
class SequenceCache {
 public:
  SequenceCache();
  SequenceCache(const SequenceCache& other);
  SequenceCache& operator=(const SequenceCache& other);

  /// Builds a cache from D_0..D_{count-1}. Requires at least the two seeds.
  /// Strict validation also requires D_0 = 1, D_1 = 0 and the recurrence.
  static SequenceCache from_values(std::vector<BigNat> values, CacheValidation validation);

  /// D_n, extending the prefix with the two-term recurrence as needed.
  BigNat derangement(std::size_t n);
  BigNat factorial(std::size_t n);

  /// Grows the prefix so that D_0..D_n are cached.
  void extend_to(std::size_t n);

  std::size_t size() const;
  std::vector<BigNat> values() const;
  CacheSource source(std::size_t n) const;

  /// Smallest index whose entry disagrees with the seeds or the recurrence.
  std::optional<std::size_t> first_inconsistency() const;

  /// Compares the cached derangement prefixes; source tags are ignored.
  friend bool operator==(const SequenceCache& a, const SequenceCache& b);

 private:
  void extend_locked(std::size_t n);

  mutable std::shared_mutex mutex_;
  std::vector<BigNat> derangements_;
  std::vector<CacheSource> sources_;
  std::vector<BigNat> factorials_;
};

enum class DerangementMethod { two_term, alternating, subfactorial, telescoped };

/// D_n via the two-term recurrence; memoized in `cache`.
BigNat derangement_two_term(SequenceCache& cache, std::size_t n);
/// D_n via D_n = n D_{n-1} + (-1)^n from D_0 = 1. Does not touch any cache.
BigNat derangement_alternating(std::size_t n);
/// D_n = sum_{k=0}^{n} (-1)^k n!/k!, each quotient taken as an exact
/// division of factorials.
BigNat derangement_subfactorial(std::size_t n);
/// D_n as the expanded alternating sum of descending products
///   n(n-1)...3 - n(n-1)...4 + ... + (-1)^n,
/// i.e. sum_{k=2}^{n} (-1)^k n!/k!, where the k = 0 and k = 1 terms of the
/// subfactorial sum cancel. The products are built by running
/// multiplication from the (-1)^n end. Throws std::domain_error for n < 2.
BigNat derangement_telescoped(std::size_t n);

/// Dispatch helper; the two-term method uses `cache`, the others ignore it.
BigNat derangement(DerangementMethod method, SequenceCache& cache, std::size_t n);

/// D_n(r) = C(n, r) D_{n-r}; 0 when r < 0 or r > n.
BigNat rencontres(SequenceCache& cache, std::size_t n, std::int64_t r);

struct RencontresRow {
  std::size_t n = 0;
  std::vector<BigNat> values;  // values[r] = D_n(r)
};

/// Full row D_n(0..n). Throws InternalConsistencyError if the row does not
/// sum to n!.
RencontresRow rencontres_row(SequenceCache& cache, std::size_t n);

/// |A_n| = D_n / (n-1), the number of derangements with a prescribed
/// image sigma(k) = j != k. Throws std::domain_error for n < 2 and
/// InternalConsistencyError if the division is not exact.
BigNat a_number(SequenceCache& cache, std::size_t n);
/// |A_n| from |A_2| = 1 and |A_n| = D_{n-2} + (n-2)|A_{n-1}|.
BigNat a_number_recurrence(SequenceCache& cache, std::size_t n);

/// sum_{k=0}^{depth} (-1)^k / k!, the truncated series for 1/e.
ExactRatio reciprocal_e_partial_sum(std::size_t depth);

// Persistence. Text format:
//   rencontres-kit-cache v1
//   derangements <count>
//   <D_0>
//   ...
//   <D_{count-1}>
inline constexpr const char* kCacheHeader = "rencontres-kit-cache v1";

void cache_write(const SequenceCache& cache, std::ostream& out);
SequenceCache cache_read(std::istream& in, CacheValidation validation = CacheValidation::strict);

/// Writes atomically (temp file + rename). Throws CacheError{io}.
void cache_save(const SequenceCache& cache, const std::filesystem::path& destination);
/// Throws CacheError{missing | io | parse | validation}.
SequenceCache cache_load(const std::filesystem::path& source,
                         CacheValidation validation = CacheValidation::strict);

}  // namespace rencontres
