#include "rencontres/identities.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace rencontres {

namespace {

struct IdentityInfo {
  IdentityId id;
  std::string_view name;
  std::size_t min_n;
  bool takes_r;
};

constexpr std::array<IdentityInfo, 9> kInfo = {{
    {IdentityId::row_sum, "row_sum", 0, false},
    {IdentityId::deutsch_elizalde, "deutsch_elizalde", 2, false},
    {IdentityId::weighted_rencontres, "weighted_rencontres", 2, false},
    {IdentityId::prototype, "prototype", 2, false},
    {IdentityId::thm1, "thm1", 1, false},
    {IdentityId::thm2, "thm2", 1, false},
    {IdentityId::thm1_general, "thm1_general", 1, true},
    {IdentityId::thm2_general, "thm2_general", 1, true},
    {IdentityId::d1_difference, "d1_difference", 1, false},
}};

const IdentityInfo& info(IdentityId id) {
  for (const auto& entry : kInfo) {
    if (entry.id == id) return entry;
  }
  throw std::invalid_argument("unknown identity");
}

ExactRatio signed_unit(std::size_t exponent) { return ExactRatio(exponent % 2 == 0 ? 1 : -1); }

ExactRatio as_ratio(const BigNat& value) { return ExactRatio(BigInt(value)); }

// Admissible [lo, hi] after clamping range.n_min up to the identity's minimum.
std::optional<std::pair<std::size_t, std::size_t>> admissible_window(IdentityId id, const RangeSpec& range,
                                                                     std::vector<std::string>& notices) {
  range.validate();
  const auto& entry = info(id);
  std::size_t lo = range.n_min;
  if (lo < entry.min_n) {
    notices.push_back(std::string(entry.name) + ": n_min raised from " + std::to_string(lo) + " to " +
                      std::to_string(entry.min_n));
    lo = entry.min_n;
  }
  if (lo > range.n_max) {
    notices.push_back(std::string(entry.name) + ": no admissible n in [" + std::to_string(range.n_min) +
                      ", " + std::to_string(range.n_max) + "]");
    return std::nullopt;
  }
  return std::pair{lo, range.n_max};
}

std::vector<std::size_t> sorted_r_values(const RangeSpec& range) {
  auto rs = range.r_values;
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  return rs;
}

IdentityReport make_report(IdentityId id, std::size_t n, std::optional<std::size_t> r, ExactRatio lhs,
                           ExactRatio rhs) {
  const bool holds = lhs == rhs;
  return IdentityReport{id, n, r, std::move(lhs), std::move(rhs), holds};
}

void sort_reports(std::vector<IdentityReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const IdentityReport& a, const IdentityReport& b) {
    return std::tie(a.n, a.r) < std::tie(b.n, b.r);
  });
}

// Records a notice when `summand` is fractional. Returns the summand unchanged.
const ExactRatio& note_if_fractional(const ExactRatio& summand, IdentityId id, std::size_t k,
                                     std::optional<std::size_t> r, std::vector<std::string>& notices) {
  if (!summand.as_integer()) {
    std::string where = "k=" + std::to_string(k);
    if (r) where += ", r=" + std::to_string(*r);
    notices.push_back(std::string(info(id).name) + ": summand at " + where + " is not an integer (" +
                      summand.to_string() + ")");
  }
  return summand;
}

}  // namespace

std::string_view identity_name(IdentityId id) { return info(id).name; }

std::optional<IdentityId> parse_identity(std::string_view name) {
  for (const auto& entry : kInfo) {
    if (entry.name == name) return entry.id;
  }
  return std::nullopt;
}

std::size_t identity_min_n(IdentityId id) { return info(id).min_n; }

bool identity_takes_r(IdentityId id) { return info(id).takes_r; }

std::string IdentityReport::to_json() const {
  nlohmann::ordered_json j;
  j["identity_id"] = identity_name(identity_id);
  j["n"] = n;
  j["r"] = r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr);
  j["lhs"] = lhs.to_string();
  j["rhs"] = rhs.to_string();
  j["holds"] = holds;
  return j.dump();
}

void RangeSpec::validate() const {
  if (n_min > n_max) {
    throw std::invalid_argument("empty range: n_min " + std::to_string(n_min) + " > n_max " +
                                std::to_string(n_max));
  }
}

CheckResult identity_row_sum(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::row_sum, range, result.notices);
  if (!window) return result;
  for (std::size_t n = window->first; n <= window->second; ++n) {
    BigNat row_total(0);
    for (std::size_t k = 0; k <= n; ++k) row_total += rencontres(cache, n, static_cast<std::int64_t>(k));
    result.reports.push_back(
        make_report(IdentityId::row_sum, n, std::nullopt, as_ratio(factorial(n)), as_ratio(row_total)));
  }
  return result;
}

CheckResult identity_deutsch_elizalde(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::deutsch_elizalde, range, result.notices);
  if (!window) return result;
  for (std::size_t n = window->first; n <= window->second; ++n) {
    BigNat sum(0);
    for (std::size_t k = 2; k <= n; ++k) {
      sum += BigNat(k - 1) * binomial(n, static_cast<std::int64_t>(k)) * cache.derangement(n - k);
    }
    result.reports.push_back(
        make_report(IdentityId::deutsch_elizalde, n, std::nullopt, as_ratio(cache.derangement(n)), as_ratio(sum)));
  }
  return result;
}

CheckResult identity_weighted_rencontres(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::weighted_rencontres, range, result.notices);
  if (!window) return result;
  for (std::size_t n = window->first; n <= window->second; ++n) {
    BigNat sum(0);
    for (std::size_t k = 2; k <= n; ++k) {
      sum += BigNat(k - 1) * rencontres(cache, n, static_cast<std::int64_t>(k));
    }
    result.reports.push_back(make_report(IdentityId::weighted_rencontres, n, std::nullopt,
                                         as_ratio(cache.derangement(n)), as_ratio(sum)));
  }
  return result;
}

CheckResult identity_prototype(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::prototype, range, result.notices);
  if (!window) return result;
  for (std::size_t n = window->first; n <= window->second; ++n) {
    // k runs downward so that `weight` = n!/k! grows by one factor per step.
    BigNat weight(1);
    BigNat sum(0);
    for (std::size_t k = n; k >= 2; --k) {
      if (k < n) weight *= BigNat(k + 1);
      sum += weight * cache.derangement(k);
    }
    sum += cache.factorial(n);
    ExactRatio rhs(BigInt(cache.derangement(n + 2)), BigNat(n + 1));
    result.reports.push_back(make_report(IdentityId::prototype, n, std::nullopt, as_ratio(sum), std::move(rhs)));
  }
  return result;
}

CheckResult identity_thm1(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::thm1, range, result.notices);
  if (!window) return result;
  ExactRatio lhs(1);
  for (std::size_t n = 1; n <= window->second; ++n) {
    lhs += ExactRatio(BigInt(cache.derangement(n)), cache.factorial(n));
    if (n < window->first) continue;
    ExactRatio rhs(BigInt(cache.derangement(n + 2)), cache.factorial(n + 1));
    result.reports.push_back(make_report(IdentityId::thm1, n, std::nullopt, lhs, std::move(rhs)));
  }
  return result;
}

CheckResult identity_thm2(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::thm2, range, result.notices);
  if (!window) return result;
  ExactRatio lhs(1);
  for (std::size_t n = 1; n <= window->second; ++n) {
    const ExactRatio summand(BigInt(cache.derangement(n + 3)), BigNat(n + 2));
    lhs += signed_unit(n) * note_if_fractional(summand, IdentityId::thm2, n, std::nullopt, result.notices);
    if (n < window->first) continue;
    ExactRatio rhs = signed_unit(n) * as_ratio(cache.derangement(n + 2));
    result.reports.push_back(make_report(IdentityId::thm2, n, std::nullopt, lhs, std::move(rhs)));
  }
  return result;
}

CheckResult identity_thm1_general(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::thm1_general, range, result.notices);
  if (!window) return result;
  for (std::size_t r : sorted_r_values(range)) {
    const auto rr = static_cast<std::int64_t>(r);
    ExactRatio lhs(1);
    for (std::size_t n = 1; n <= window->second; ++n) {
      lhs += ExactRatio(BigInt(rencontres(cache, n + r, rr)), cache.factorial(n) * binomial(n + r, rr));
      if (n < window->first) continue;
      ExactRatio rhs(BigInt(rencontres(cache, n + r + 2, rr)),
                     cache.factorial(n + 1) * binomial(n + r + 2, rr));
      result.reports.push_back(make_report(IdentityId::thm1_general, n, r, lhs, std::move(rhs)));
    }
  }
  sort_reports(result.reports);
  return result;
}

CheckResult identity_thm2_general(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::thm2_general, range, result.notices);
  if (!window) return result;
  for (std::size_t r : sorted_r_values(range)) {
    const auto rr = static_cast<std::int64_t>(r);
    ExactRatio lhs(1);
    for (std::size_t n = 1; n <= window->second; ++n) {
      const ExactRatio summand(BigInt(rencontres(cache, n + r + 3, rr)),
                               BigNat(n + 2) * binomial(n + r + 3, rr));
      lhs += signed_unit(n) * note_if_fractional(summand, IdentityId::thm2_general, n, r, result.notices);
      if (n < window->first) continue;
      ExactRatio rhs =
          signed_unit(n) * ExactRatio(BigInt(rencontres(cache, n + r + 2, rr)), binomial(n + r + 2, rr));
      result.reports.push_back(make_report(IdentityId::thm2_general, n, r, lhs, std::move(rhs)));
    }
  }
  sort_reports(result.reports);
  return result;
}

CheckResult identity_d1_difference(SequenceCache& cache, const RangeSpec& range) {
  CheckResult result;
  const auto window = admissible_window(IdentityId::d1_difference, range, result.notices);
  if (!window) return result;
  for (std::size_t n = window->first; n <= window->second; ++n) {
    ExactRatio lhs = as_ratio(cache.derangement(n)) - as_ratio(rencontres(cache, n, 1));
    result.reports.push_back(make_report(IdentityId::d1_difference, n, std::nullopt, std::move(lhs), signed_unit(n)));
  }
  return result;
}

CheckResult run_identity(IdentityId id, SequenceCache& cache, const RangeSpec& range) {
  switch (id) {
    case IdentityId::row_sum:
      return identity_row_sum(cache, range);
    case IdentityId::deutsch_elizalde:
      return identity_deutsch_elizalde(cache, range);
    case IdentityId::weighted_rencontres:
      return identity_weighted_rencontres(cache, range);
    case IdentityId::prototype:
      return identity_prototype(cache, range);
    case IdentityId::thm1:
      return identity_thm1(cache, range);
    case IdentityId::thm2:
      return identity_thm2(cache, range);
    case IdentityId::thm1_general:
      return identity_thm1_general(cache, range);
    case IdentityId::thm2_general:
      return identity_thm2_general(cache, range);
    case IdentityId::d1_difference:
      return identity_d1_difference(cache, range);
  }
  throw std::invalid_argument("unknown identity");
}

SuiteSummary run_all(SequenceCache& cache, const RangeSpec& range, std::span<const IdentityId> identities) {
  range.validate();
  std::size_t max_r = 0;
  for (auto r : range.r_values) max_r = std::max(max_r, r);
  // thm2_general reaches furthest: D_{n+r+3}.
  cache.extend_to(range.n_max + max_r + 3);

  SuiteSummary summary;
  for (IdentityId id : identities) {
    auto result = run_identity(id, cache, range);
    for (auto& report : result.reports) {
      ++summary.checked;
      if (!report.holds) ++summary.failed;
      summary.reports.push_back(std::move(report));
    }
    for (auto& notice : result.notices) summary.notices.push_back(std::move(notice));
  }
  return summary;
}

}  // namespace rencontres
