#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rencontres/identities.hpp"
#include "rencontres/oracle.hpp"

namespace rencontres::cli {

enum ExitCode : int {
  kSuccess = 0,
  kIdentityFailure = 1,
  kUsageError = 2,
  kHorizonRefusal = 3,
  kInternalConsistency = 4,
};

enum class OutputFormat { plain, csv, jsonl };

struct CliConfig {
  std::filesystem::path cache_path;
  OutputFormat output_format = OutputFormat::plain;
  std::size_t enumeration_horizon = kDefaultEnumerationHorizon;
  RangeSpec verify_range;
  std::optional<std::uint64_t> seed;
};

/// $XDG_CACHE_HOME/rencontres-kit/derangements.cache, falling back to
/// $HOME/.cache/... and finally to the working directory.
std::filesystem::path default_cache_path();

/// First 8 digits and the digit count, e.g. "10470804[35660]".
std::string digest(const BigNat& value);

/// Runs `rencontres <command> [flags]`. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rencontres::cli
