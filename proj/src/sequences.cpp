#include "rencontres/sequences.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

namespace rencontres {

namespace {

BigNat two_term_step(std::size_t n, const BigNat& previous, const BigNat& before_previous) {
  return BigNat(n - 1) * (previous + before_previous);
}

}  // namespace

// ---- SequenceCache ----

SequenceCache::SequenceCache()
    : derangements_{BigNat(1), BigNat(0)},
      sources_{CacheSource::seed, CacheSource::seed},
      factorials_{BigNat(1)} {}

SequenceCache::SequenceCache(const SequenceCache& other) {
  std::shared_lock lock(other.mutex_);
  derangements_ = other.derangements_;
  sources_ = other.sources_;
  factorials_ = other.factorials_;
}

SequenceCache& SequenceCache::operator=(const SequenceCache& other) {
  if (this == &other) return *this;
  SequenceCache copy(other);
  std::unique_lock lock(mutex_);
  derangements_ = std::move(copy.derangements_);
  sources_ = std::move(copy.sources_);
  factorials_ = std::move(copy.factorials_);
  return *this;
}

SequenceCache SequenceCache::from_values(std::vector<BigNat> values, CacheValidation validation) {
  if (values.size() < 2) {
    throw CacheError(CacheError::Kind::validation,
                     "cache must hold at least D_0 and D_1, got " + std::to_string(values.size()) +
                         " entries");
  }
  SequenceCache cache;
  cache.derangements_ = std::move(values);
  cache.sources_.assign(cache.derangements_.size(), CacheSource::loaded);
  if (validation == CacheValidation::strict) {
    if (auto bad = cache.first_inconsistency()) {
      throw CacheError(CacheError::Kind::validation,
                       "cache entry D_" + std::to_string(*bad) + " = " +
                           cache.derangements_[*bad].to_string() +
                           " is inconsistent with D_0 = 1, D_1 = 0 and the two-term recurrence");
    }
  }
  return cache;
}

BigNat SequenceCache::derangement(std::size_t n) {
  {
    std::shared_lock lock(mutex_);
    if (n < derangements_.size()) return derangements_[n];
  }
  std::unique_lock lock(mutex_);
  extend_locked(n);
  return derangements_[n];
}

BigNat SequenceCache::factorial(std::size_t n) {
  {
    std::shared_lock lock(mutex_);
    if (n < factorials_.size()) return factorials_[n];
  }
  std::unique_lock lock(mutex_);
  while (factorials_.size() <= n) {
    factorials_.push_back(factorials_.back() * BigNat(factorials_.size()));
  }
  return factorials_[n];
}

void SequenceCache::extend_to(std::size_t n) {
  std::unique_lock lock(mutex_);
  extend_locked(n);
}

void SequenceCache::extend_locked(std::size_t n) {
  if (n < derangements_.size()) return;
  derangements_.reserve(n + 1);
  sources_.reserve(n + 1);
  for (std::size_t m = derangements_.size(); m <= n; ++m) {
    derangements_.push_back(two_term_step(m, derangements_[m - 1], derangements_[m - 2]));
    sources_.push_back(CacheSource::two_term);
  }
}

std::size_t SequenceCache::size() const {
  std::shared_lock lock(mutex_);
  return derangements_.size();
}

std::vector<BigNat> SequenceCache::values() const {
  std::shared_lock lock(mutex_);
  return derangements_;
}

CacheSource SequenceCache::source(std::size_t n) const {
  std::shared_lock lock(mutex_);
  return sources_.at(n);
}

std::optional<std::size_t> SequenceCache::first_inconsistency() const {
  std::shared_lock lock(mutex_);
  if (derangements_[0] != BigNat(1)) return 0;
  if (derangements_[1] != BigNat(0)) return 1;
  for (std::size_t n = 2; n < derangements_.size(); ++n) {
    if (derangements_[n] != two_term_step(n, derangements_[n - 1], derangements_[n - 2])) {
      return n;
    }
  }
  return std::nullopt;
}

bool operator==(const SequenceCache& a, const SequenceCache& b) {
  if (&a == &b) return true;
  std::shared_lock la(a.mutex_, std::defer_lock);
  std::shared_lock lb(b.mutex_, std::defer_lock);
  std::lock(la, lb);
  return a.derangements_ == b.derangements_;
}

// ---- computation methods ----

BigNat derangement_two_term(SequenceCache& cache, std::size_t n) { return cache.derangement(n); }

BigNat derangement_alternating(std::size_t n) {
  BigNat value(1);
  for (std::size_t m = 1; m <= n; ++m) {
    value *= BigNat(m);
    if (m % 2 == 0) {
      value += BigNat(1);
    } else {
      value -= BigNat(1);
    }
  }
  return value;
}

BigNat derangement_subfactorial(std::size_t n) {
  const BigNat n_factorial = factorial(n);
  BigInt sum(0);
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt term(n_factorial.divide_exact(factorial(k)));
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  if (sum.sign() < 0) throw InternalConsistencyError("subfactorial sum is negative at n = " + std::to_string(n));
  return sum.magnitude();
}

BigNat derangement_telescoped(std::size_t n) {
  if (n < 2) {
    throw std::domain_error("telescoped expansion starts at n = 2, got n = " + std::to_string(n));
  }
  // Walk k = n, n-1, ..., 2; `product` holds n!/k!.
  BigNat product(1);
  BigInt sum(n % 2 == 0 ? 1 : -1);
  for (std::size_t k = n - 1; k >= 2; --k) {
    product *= BigNat(k + 1);
    if (k % 2 == 0) {
      sum += BigInt(product);
    } else {
      sum -= BigInt(product);
    }
  }
  if (sum.sign() < 0) throw InternalConsistencyError("telescoped sum is negative at n = " + std::to_string(n));
  return sum.magnitude();
}

BigNat derangement(DerangementMethod method, SequenceCache& cache, std::size_t n) {
  switch (method) {
    case DerangementMethod::two_term:
      return derangement_two_term(cache, n);
    case DerangementMethod::alternating:
      return derangement_alternating(n);
    case DerangementMethod::subfactorial:
      return derangement_subfactorial(n);
    case DerangementMethod::telescoped:
      return derangement_telescoped(n);
  }
  throw std::invalid_argument("unknown derangement method");
}

// ---- rencontres ----

BigNat rencontres(SequenceCache& cache, std::size_t n, std::int64_t r) {
  if (r < 0 || static_cast<std::size_t>(r) > n) return BigNat(0);
  return binomial(n, r) * cache.derangement(n - static_cast<std::size_t>(r));
}

RencontresRow rencontres_row(SequenceCache& cache, std::size_t n) {
  RencontresRow row{n, {}};
  row.values.reserve(n + 1);
  BigNat total(0);
  for (std::size_t r = 0; r <= n; ++r) {
    row.values.push_back(rencontres(cache, n, static_cast<std::int64_t>(r)));
    total += row.values.back();
  }
  if (total != cache.factorial(n)) {
    throw InternalConsistencyError("rencontres row " + std::to_string(n) + " sums to " +
                                   total.to_string() + ", expected " + std::to_string(n) + "!");
  }
  return row;
}

// ---- |A_n| ----

BigNat a_number(SequenceCache& cache, std::size_t n) {
  if (n < 2) throw std::domain_error("|A_n| is defined for n >= 2, got n = " + std::to_string(n));
  return cache.derangement(n).divide_exact(BigNat(n - 1));
}

BigNat a_number_recurrence(SequenceCache& cache, std::size_t n) {
  if (n < 2) throw std::domain_error("|A_n| is defined for n >= 2, got n = " + std::to_string(n));
  BigNat a(1);  // |A_2|
  for (std::size_t m = 3; m <= n; ++m) {
    a = cache.derangement(m - 2) + BigNat(m - 2) * a;
  }
  return a;
}

ExactRatio reciprocal_e_partial_sum(std::size_t depth) {
  // Common denominator depth!: sum_k (-1)^k depth!/k!.
  BigInt numerator(0);
  for (std::size_t k = 0; k <= depth; ++k) {
    BigInt term(factorial_quotient(depth, k));
    if (k % 2 == 0) {
      numerator += term;
    } else {
      numerator -= term;
    }
  }
  return ExactRatio(numerator, factorial(depth));
}

// ---- persistence ----

void cache_write(const SequenceCache& cache, std::ostream& out) {
  const auto values = cache.values();
  out << kCacheHeader << '\n' << "derangements " << values.size() << '\n';
  for (const auto& v : values) out << v.to_string() << '\n';
}

SequenceCache cache_read(std::istream& in, CacheValidation validation) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  auto parse_error = [](const std::string& what) {
    return CacheError(CacheError::Kind::parse, "cache parse error: " + what);
  };
  if (text.empty()) throw parse_error("empty input");
  if (text.back() != '\n') throw parse_error("missing final newline");

  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    auto eol = rest.find('\n');
    lines.push_back(rest.substr(0, eol));
    rest.remove_prefix(eol + 1);
  }

  if (lines[0] != kCacheHeader) throw parse_error("bad header line '" + std::string(lines[0]) + "'");
  if (lines.size() < 2) throw parse_error("missing count line");
  constexpr std::string_view kCountPrefix = "derangements ";
  if (!lines[1].starts_with(kCountPrefix)) throw parse_error("bad count line '" + std::string(lines[1]) + "'");

  std::size_t count = 0;
  try {
    const auto count_value = BigNat::parse(lines[1].substr(kCountPrefix.size()));
    if (count_value > BigNat(lines.size())) throw parse_error("count exceeds number of lines");
    count = std::stoull(count_value.to_string());
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  if (lines.size() != count + 2) {
    throw parse_error("expected " + std::to_string(count) + " values, found " +
                      std::to_string(lines.size() - 2));
  }

  std::vector<BigNat> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    try {
      values.push_back(BigNat::parse(lines[i + 2]));
    } catch (const std::invalid_argument& e) {
      throw parse_error("line " + std::to_string(i + 3) + ": " + e.what());
    }
  }
  return SequenceCache::from_values(std::move(values), validation);
}

void cache_save(const SequenceCache& cache, const std::filesystem::path& destination) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (destination.has_parent_path()) fs::create_directories(destination.parent_path(), ec);
  auto temp = destination;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(CacheError::Kind::io, "cannot write cache file " + temp.string());
    cache_write(cache, out);
    out.flush();
    if (!out) throw CacheError(CacheError::Kind::io, "failed writing cache file " + temp.string());
  }
  fs::rename(temp, destination, ec);
  if (ec) {
    throw CacheError(CacheError::Kind::io,
                     "cannot move cache into place at " + destination.string() + ": " + ec.message());
  }
}

SequenceCache cache_load(const std::filesystem::path& source, CacheValidation validation) {
  std::error_code ec;
  if (!std::filesystem::exists(source, ec)) {
    throw CacheError(CacheError::Kind::missing, "cache file not found: " + source.string());
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw CacheError(CacheError::Kind::io, "cannot open cache file " + source.string());
  return cache_read(in, validation);
}

}  // namespace rencontres
