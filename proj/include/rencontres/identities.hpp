#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rencontres/exact_arith.hpp"
#include "rencontres/sequences.hpp"

namespace rencontres {

enum class IdentityId {
  row_sum,              // n! = sum_k D_n(k)
  deutsch_elizalde,     // D_n = sum_{k>=2} (k-1) C(n,k) D_{n-k}
  weighted_rencontres,  // D_n = sum_{k>=2} (k-1) D_n(k)
  prototype,            // n! + sum_{k>=2} (n!/k!) D_k = D_{n+2}/(n+1)
  thm1,                 // 1 + sum_{k>=1} D_k/k! = D_{n+2}/(n+1)!
  thm2,                 // 1 + sum_{k>=1} (-1)^k D_{k+3}/(k+2) = (-1)^n D_{n+2}
  thm1_general,         // thm1 with D_m replaced by D_m(r)/C(m,r)
  thm2_general,         // thm2 with D_m replaced by D_m(r)/C(m,r)
  d1_difference,        // D_n - D_n(1) = (-1)^n
};

inline constexpr std::array<IdentityId, 9> kAllIdentities = {
    IdentityId::row_sum,  IdentityId::deutsch_elizalde, IdentityId::weighted_rencontres,
    IdentityId::prototype, IdentityId::thm1,            IdentityId::thm2,
    IdentityId::thm1_general, IdentityId::thm2_general, IdentityId::d1_difference,
};

std::string_view identity_name(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view name);
/// Smallest n the identity is stated for.
std::size_t identity_min_n(IdentityId id);
/// Whether the identity is parameterized by a fixed-point count r.
bool identity_takes_r(IdentityId id);

struct IdentityReport {
  IdentityId identity_id;
  std::size_t n;
  std::optional<std::size_t> r;
  ExactRatio lhs;
  ExactRatio rhs;
  bool holds;

  /// One JSON object, keys in the order identity_id, n, r, lhs, rhs, holds.
  std::string to_json() const;

  friend bool operator==(const IdentityReport&, const IdentityReport&) = default;
};

struct RangeSpec {
  std::size_t n_min = 0;
  std::size_t n_max = 200;
  std::vector<std::size_t> r_values = {0, 1, 2, 3};

  /// Throws std::invalid_argument when n_min > n_max.
  void validate() const;
};

struct CheckResult {
  /// Ascending in n, then r.
  std::vector<IdentityReport> reports;
  /// Clamping and integrality messages, human readable.
  std::vector<std::string> notices;
};

CheckResult identity_row_sum(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_deutsch_elizalde(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_weighted_rencontres(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_prototype(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_thm1(SequenceCache& cache, const RangeSpec& range);
/// Also checks that each summand D_{k+3}/(k+2) is an integer; a fractional
/// summand is reported as a notice and makes the affected reports fail.
CheckResult identity_thm2(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_thm1_general(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_thm2_general(SequenceCache& cache, const RangeSpec& range);
CheckResult identity_d1_difference(SequenceCache& cache, const RangeSpec& range);

CheckResult run_identity(IdentityId id, SequenceCache& cache, const RangeSpec& range);

struct SuiteSummary {
  std::vector<IdentityReport> reports;
  std::vector<std::string> notices;
  std::size_t checked = 0;
  std::size_t failed = 0;

  bool all_hold() const { return failed == 0; }
};

/// Runs the selected checkers in the order given, after extending `cache`
/// far enough for all of them.
SuiteSummary run_all(SequenceCache& cache, const RangeSpec& range,
                     std::span<const IdentityId> identities = kAllIdentities);

}  // namespace rencontres
