#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rencontres/exact_arith.hpp"

namespace rencontres {

inline constexpr std::size_t kDefaultEnumerationHorizon = 10;

/// A permutation of [n] = {1, ..., n} in one-line notation:
/// images()[i] is the image of i + 1.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `images` is a bijection on [n].
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return images_.size(); }
  std::span<const std::uint32_t> images() const { return images_; }
  /// sigma(k) for 1-based k.
  std::uint32_t operator()(std::size_t k) const { return images_.at(k - 1); }

  /// "s(1) s(2) ... s(n)", space separated; empty for n = 0.
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

std::size_t count_fixed_points(const Permutation& p);

class HorizonExceeded : public std::runtime_error {
 public:
  HorizonExceeded(std::size_t requested, std::size_t horizon);
  std::size_t requested() const { return requested_; }
  std::size_t horizon() const { return horizon_; }

 private:
  std::size_t requested_;
  std::size_t horizon_;
};

/// Number of permutations of [n] with exactly r fixed points, r = 0..n.
struct FixedPointCensus {
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const FixedPointCensus&, const FixedPointCensus&) = default;
};

enum class EnumerationOrder {
  /// std::next_permutation from the identity.
  lexicographic,
  /// Heap's algorithm: successive permutations differ by one swap.
  heap,
};

struct CensusOptions {
  std::size_t horizon = kDefaultEnumerationHorizon;
  EnumerationOrder order = EnumerationOrder::lexicographic;
  /// Lexicographic enumeration is split by the image of 1 across this many
  /// threads; 0 picks std::thread::hardware_concurrency(). The merged
  /// census does not depend on the worker count.
  unsigned workers = 1;
};

/// Exhaustive census of S_n. Throws HorizonExceeded when n > options.horizon.
FixedPointCensus enumerate_census(std::size_t n, const CensusOptions& options = {});

/// enumerate_census(n).counts[0] as a BigNat.
BigNat brute_derangement_count(std::size_t n, std::size_t horizon = kDefaultEnumerationHorizon);

/// Uniform random derangement of [n], n >= 2: shuffle uniformly
/// (Fisher-Yates) and retry while any point is fixed. The generator is
/// std::mt19937_64; bounded draws use rejection on the raw 64-bit output,
/// so results are reproducible across standard libraries.
Permutation sample_derangement(std::size_t n, std::mt19937_64& rng);
Permutation sample_derangement(std::size_t n, std::uint64_t seed);

inline constexpr int kSampleRetryCap = 1000;

}  // namespace rencontres
