#include "rencontres/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

namespace rencontres {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (auto v : images_) {
    if (v < 1 || v > images_.size() || seen[v]) {
      throw std::invalid_argument("not a permutation of [" + std::to_string(images_.size()) + "]");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1U);
  return Permutation(std::move(images));
}

std::string Permutation::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(images_[i]);
  }
  return out;
}

std::size_t count_fixed_points(const Permutation& p) {
  std::size_t fixed = 0;
  for (std::size_t k = 1; k <= p.size(); ++k) fixed += p(k) == k ? 1 : 0;
  return fixed;
}

HorizonExceeded::HorizonExceeded(std::size_t requested, std::size_t horizon)
    : std::runtime_error("enumeration of S_" + std::to_string(requested) +
                         " refused: enumeration horizon is " + std::to_string(horizon)),
      requested_(requested),
      horizon_(horizon) {}

namespace {

std::size_t fixed_points(const std::vector<std::uint32_t>& images) {
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < images.size(); ++i) fixed += images[i] == i + 1 ? 1 : 0;
  return fixed;
}

// Census of the permutations whose image of 1 is `first`.
std::vector<std::uint64_t> lexicographic_slice(std::size_t n, std::uint32_t first) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  std::vector<std::uint32_t> images(n);
  images[0] = first;
  std::uint32_t next = 1;
  for (std::size_t i = 1; i < n; ++i, ++next) {
    if (next == first) ++next;
    images[i] = next;
  }
  do {
    ++counts[fixed_points(images)];
  } while (std::next_permutation(images.begin() + 1, images.end()));
  return counts;
}

std::vector<std::uint64_t> lexicographic_census(std::size_t n, unsigned workers) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  if (n == 0) {
    counts[0] = 1;
    return counts;
  }
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));

  std::vector<std::vector<std::uint64_t>> slices(n);
  auto run = [&](unsigned worker) {
    for (std::size_t first = worker; first < n; first += workers) {
      slices[first] = lexicographic_slice(n, static_cast<std::uint32_t>(first + 1));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& slice : slices) {
    for (std::size_t r = 0; r <= n; ++r) counts[r] += slice[r];
  }
  return counts;
}

// Iterative Heap's algorithm.
std::vector<std::uint64_t> heap_census(std::size_t n) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1U);
  std::vector<std::size_t> c(n, 0);
  ++counts[fixed_points(images)];
  std::size_t i = 1;
  while (i < n) {
    if (c[i] < i) {
      std::swap(images[i % 2 == 0 ? 0 : c[i]], images[i]);
      ++counts[fixed_points(images)];
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  return counts;
}

// Unbiased draw from [0, bound) using only the engine's raw output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

FixedPointCensus enumerate_census(std::size_t n, const CensusOptions& options) {
  if (n > options.horizon) throw HorizonExceeded(n, options.horizon);
  FixedPointCensus census{n, {}};
  census.counts = options.order == EnumerationOrder::heap ? heap_census(n)
                                                         : lexicographic_census(n, options.workers);
  return census;
}

BigNat brute_derangement_count(std::size_t n, std::size_t horizon) {
  return BigNat(enumerate_census(n, {.horizon = horizon}).counts[0]);
}

Permutation sample_derangement(std::size_t n, std::mt19937_64& rng) {
  if (n < 2) throw std::domain_error("no derangement of [" + std::to_string(n) + "] to sample");
  std::vector<std::uint32_t> images(n);
  for (int attempt = 0; attempt < kSampleRetryCap; ++attempt) {
    std::iota(images.begin(), images.end(), 1U);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(images[i], images[uniform_below(rng, i + 1)]);
    }
    if (fixed_points(images) == 0) return Permutation(images);
  }
  throw InternalConsistencyError("no derangement after " + std::to_string(kSampleRetryCap) +
                                 " shuffles of [" + std::to_string(n) + "]");
}

Permutation sample_derangement(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_derangement(n, rng);
}

}  // namespace rencontres
