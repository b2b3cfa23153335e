#include "rencontres/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

namespace rencontres::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::map<std::string, OutputFormat> kFormats = {
    {"plain", OutputFormat::plain}, {"csv", OutputFormat::csv}, {"jsonl", OutputFormat::jsonl}};

// Command-line spelling of each computation method; "oracle" is handled apart.
const std::vector<std::pair<std::string, DerangementMethod>> kMethods = {
    {"two-term", DerangementMethod::two_term},
    {"alternating", DerangementMethod::alternating},
    {"subfactorial", DerangementMethod::subfactorial},
    {"telescoped", DerangementMethod::telescoped},
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OpenCache {
  SequenceCache cache;
  std::size_t loaded_size = 0;
  bool consistent = true;
};

OpenCache open_cache(const std::filesystem::path& path, CacheValidation validation, std::ostream& err) {
  OpenCache handle;
  try {
    handle.cache = cache_load(path, validation);
  } catch (const CacheError& e) {
    if (e.kind() != CacheError::Kind::missing) throw;
  }
  handle.loaded_size = handle.cache.size();
  if (validation == CacheValidation::unchecked) {
    if (auto bad = handle.cache.first_inconsistency()) {
      handle.consistent = false;
      err << "notice: cache " << path.string() << " is inconsistent from D_" << *bad
          << "; checking it as-is and leaving the file untouched\n";
    }
  }
  return handle;
}

void persist(const OpenCache& handle, const std::filesystem::path& path, std::ostream& err) {
  if (!handle.consistent || handle.cache.size() <= handle.loaded_size) return;
  try {
    cache_save(handle.cache, path);
  } catch (const CacheError& e) {
    err << "warning: " << e.what() << '\n';
  }
}

// ---- compute ----

struct ComputeArgs {
  std::size_t n = 0;
  std::string method = "two-term";
};

int cmd_compute(const ComputeArgs& args, const CliConfig& config, std::ostream& out, std::ostream& err) {
  BigNat value;
  if (args.method == "oracle") {
    value = brute_derangement_count(args.n, config.enumeration_horizon);
  } else {
    const auto method =
        std::find_if(kMethods.begin(), kMethods.end(), [&](const auto& m) { return m.first == args.method; })
            ->second;
    if (method == DerangementMethod::telescoped && args.n < 2) {
      throw UsageError("the telescoped method needs n >= 2");
    }
    if (method == DerangementMethod::two_term) {
      auto handle = open_cache(config.cache_path, CacheValidation::strict, err);
      value = derangement_two_term(handle.cache, args.n);
      persist(handle, config.cache_path, err);
    } else {
      SequenceCache unused;
      value = derangement(method, unused, args.n);
    }
  }
  switch (config.output_format) {
    case OutputFormat::plain:
      out << value << '\n';
      break;
    case OutputFormat::csv:
      out << "n,method,value\n" << args.n << ',' << args.method << ',' << value << '\n';
      break;
    case OutputFormat::jsonl: {
      ordered_json j;
      j["n"] = args.n;
      j["method"] = args.method;
      j["value"] = value.to_string();
      out << j.dump() << '\n';
      break;
    }
  }
  return kSuccess;
}

// ---- table ----

struct TableArgs {
  std::size_t n_max = 0;
  std::string kind = "derangements";
};

void emit_row(std::ostream& out, OutputFormat format, const std::string& key_name, std::size_t key,
              const std::string& values_name, const std::vector<BigNat>& values) {
  if (format == OutputFormat::jsonl) {
    ordered_json j;
    j[key_name] = key;
    if (values.size() == 1) {
      j[values_name] = values[0].to_string();
    } else {
      auto arr = ordered_json::array();
      for (const auto& v : values) arr.push_back(v.to_string());
      j[values_name] = std::move(arr);
    }
    out << j.dump() << '\n';
    return;
  }
  out << key;
  for (const auto& v : values) out << ',' << v;
  out << '\n';
}

int cmd_table(const TableArgs& args, const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto format = config.output_format;
  if (args.kind == "census") {
    const auto census = enumerate_census(args.n_max, {.horizon = config.enumeration_horizon});
    if (format == OutputFormat::csv) out << "r,count\n";
    for (std::size_t r = 0; r <= census.n; ++r) {
      emit_row(out, format, "r", r, "count", {BigNat(census.counts[r])});
    }
    return kSuccess;
  }

  auto handle = open_cache(config.cache_path, CacheValidation::strict, err);
  handle.cache.extend_to(args.n_max);
  if (args.kind == "derangements") {
    if (format == OutputFormat::csv) out << "n,D_n\n";
    for (std::size_t n = 0; n <= args.n_max; ++n) {
      emit_row(out, format, "n", n, "D_n", {handle.cache.derangement(n)});
    }
  } else {
    if (format == OutputFormat::csv) {
      out << "n";
      for (std::size_t r = 0; r <= args.n_max; ++r) out << ",r" << r;
      out << '\n';
    }
    for (std::size_t n = 0; n <= args.n_max; ++n) {
      auto row = rencontres_row(handle.cache, n);
      if (format == OutputFormat::jsonl) {
        ordered_json j;
        j["n"] = n;
        auto arr = ordered_json::array();
        for (const auto& v : row.values) arr.push_back(v.to_string());
        j["row"] = std::move(arr);
        out << j.dump() << '\n';
      } else {
        emit_row(out, format, "n", n, "row", row.values);
      }
    }
  }
  persist(handle, config.cache_path, err);
  return kSuccess;
}

// ---- verify ----

struct VerifyArgs {
  std::vector<std::string> identities;
};

int cmd_verify(const VerifyArgs& args, const CliConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<IdentityId> selected;
  if (args.identities.empty()) {
    selected.assign(kAllIdentities.begin(), kAllIdentities.end());
  } else {
    for (const auto& name : args.identities) {
      auto id = parse_identity(name);
      if (!id) throw UsageError("unknown identity '" + name + "'");
      selected.push_back(*id);
    }
  }
  config.verify_range.validate();

  auto handle = open_cache(config.cache_path, CacheValidation::unchecked, err);
  const auto summary = run_all(handle.cache, config.verify_range, selected);

  for (const auto& notice : summary.notices) err << "notice: " << notice << '\n';
  if (config.output_format == OutputFormat::csv) out << "identity_id,n,r,lhs,rhs,holds\n";
  for (const auto& report : summary.reports) {
    if (config.output_format == OutputFormat::csv) {
      out << identity_name(report.identity_id) << ',' << report.n << ','
          << (report.r ? std::to_string(*report.r) : std::string()) << ',' << report.lhs << ','
          << report.rhs << ',' << (report.holds ? "true" : "false") << '\n';
    } else {
      out << report.to_json() << '\n';
    }
  }
  out << "checked=" << summary.checked << " failed=" << summary.failed << '\n';
  if (!summary.all_hold()) {
    err << "FAILED: " << summary.failed << " of " << summary.checked << " identity reports do not hold\n";
  }
  persist(handle, config.cache_path, err);
  return summary.all_hold() ? kSuccess : kIdentityFailure;
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::size_t> targets;
};

int cmd_bench(const BenchArgs& args, const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (args.targets.empty()) throw UsageError("bench needs at least one target n");
  if (!std::is_sorted(args.targets.begin(), args.targets.end())) {
    throw UsageError("bench targets must be sorted ascending");
  }
  auto handle = open_cache(config.cache_path, CacheValidation::strict, err);
  const auto format = config.output_format;
  if (format == OutputFormat::csv) out << "method,n,seconds,digest\n";

  auto emit = [&](const std::string& method, std::size_t n, double seconds, const std::string& dig) {
    if (format == OutputFormat::jsonl) {
      ordered_json j;
      j["method"] = method;
      j["n"] = n;
      j["seconds"] = seconds;
      j["digest"] = dig;
      out << j.dump() << '\n';
    } else if (format == OutputFormat::csv) {
      out << method << ',' << n << ',' << seconds << ',' << dig << '\n';
    } else {
      out << method << std::string(method.size() < 13 ? 13 - method.size() : 1, ' ') << "n=" << n
          << "  " << seconds << "s  " << dig << '\n';
    }
  };

  bool agree = true;
  for (std::size_t n : args.targets) {
    std::optional<std::string> reference;
    auto record = [&](const std::string& method, auto&& compute) {
      const auto start = std::chrono::steady_clock::now();
      const BigNat value = compute();
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      const auto dig = digest(value);
      emit(method, n, elapsed.count(), dig);
      if (!reference) reference = dig;
      if (*reference != dig) agree = false;
    };
    for (const auto& [name, method] : kMethods) {
      if (method == DerangementMethod::telescoped && n < 2) {
        err << "notice: telescoped skipped at n=" << n << " (defined from n=2)\n";
        continue;
      }
      record(name, [&] { return derangement(method, handle.cache, n); });
    }
    if (n <= config.enumeration_horizon) {
      record("oracle", [&] { return brute_derangement_count(n, config.enumeration_horizon); });
    } else {
      err << "notice: oracle skipped at n=" << n << " (enumeration horizon " << config.enumeration_horizon
          << ")\n";
    }
  }
  persist(handle, config.cache_path, err);
  if (!agree) {
    err << "error: methods disagree on at least one target\n";
    return kInternalConsistency;
  }
  return kSuccess;
}

// ---- sample ----

struct SampleArgs {
  std::size_t n = 0;
  std::size_t count = 1;
};

int cmd_sample(const SampleArgs& args, const CliConfig& config, std::ostream& out, std::ostream&) {
  if (args.n < 2) throw UsageError("sample needs n >= 2");
  std::mt19937_64 rng(config.seed ? *config.seed : std::random_device{}());
  if (config.output_format == OutputFormat::csv) {
    out << "sample";
    for (std::size_t k = 1; k <= args.n; ++k) out << ",s" << k;
    out << '\n';
  }
  for (std::size_t i = 0; i < args.count; ++i) {
    const auto p = sample_derangement(args.n, rng);
    if (config.output_format == OutputFormat::jsonl) {
      ordered_json j;
      j["images"] = std::vector<std::uint32_t>(p.images().begin(), p.images().end());
      out << j.dump() << '\n';
    } else if (config.output_format == OutputFormat::csv) {
      out << i;
      for (auto v : p.images()) out << ',' << v;
      out << '\n';
    } else {
      out << p.to_string() << '\n';
    }
  }
  return kSuccess;
}

}  // namespace

std::filesystem::path default_cache_path() {
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "rencontres-kit" / "derangements.cache";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "rencontres-kit" / "derangements.cache";
  }
  return "rencontres-kit.cache";
}

std::string digest(const BigNat& value) {
  const auto text = value.to_string();
  return text.substr(0, 8) + "[" + std::to_string(text.size()) + "]";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derangement and rencontres numbers with exact arithmetic", "rencontres"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig config;
  std::string cache_flag;
  std::string format_flag = "plain";
  std::uint64_t seed = 0;
  std::vector<std::size_t> r_set = config.verify_range.r_values;

  app.add_option("--cache", cache_flag, "Cache file")->envname("RENCONTRES_CACHE");
  app.add_option("--format", format_flag, "Output format")
      ->check(CLI::IsMember({"plain", "csv", "jsonl"}));
  app.add_option("--horizon", config.enumeration_horizon, "Largest n the enumeration oracle accepts")
      ->envname("RENCONTRES_HORIZON");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the derangement sampler");

  ComputeArgs compute_args;
  auto* compute = app.add_subcommand("compute", "Print D_n");
  compute->add_option("n,--n", compute_args.n, "Index n")->required();
  std::vector<std::string> method_names{"oracle"};
  for (const auto& [name, m] : kMethods) method_names.push_back(name);
  compute->add_option("--method", compute_args.method, "Computation method")
      ->check(CLI::IsMember(method_names));

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Print D_n, rencontres rows, or an S_n census");
  table->add_option("n_max,--n-max,--n", table_args.n_max, "Last n (census: the n to enumerate)")->required();
  table->add_option("kind,--kind", table_args.kind, "derangements | rencontres | census")
      ->check(CLI::IsMember({"derangements", "rencontres", "census"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check every identity over a range");
  verify->add_option("--n-min", config.verify_range.n_min, "First n (clamped per identity)");
  verify->add_option("--n-max", config.verify_range.n_max, "Last n");
  verify->add_option("--r-set", r_set, "Fixed-point counts for the generalized identities")->delimiter(',');
  verify->add_option("--identity", verify_args.identities, "Restrict to these identities")->delimiter(',');

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time every method on the given targets");
  bench->add_option("targets,--n", bench_args.targets, "Ascending list of n")->required()->delimiter(',');

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw uniform random derangements");
  sample->add_option("n,--n", sample_args.n, "Size of the permuted set")->required();
  sample->add_option("--count", sample_args.count, "Number of samples")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  config.output_format = kFormats.at(format_flag);
  config.cache_path = cache_flag.empty() ? default_cache_path() : std::filesystem::path(cache_flag);
  config.verify_range.r_values = r_set;
  if (seed_opt->count() > 0) config.seed = seed;

  try {
    if (*compute) return cmd_compute(compute_args, config, out, err);
    if (*table) return cmd_table(table_args, config, out, err);
    if (*verify) return cmd_verify(verify_args, config, out, err);
    if (*bench) return cmd_bench(bench_args, config, out, err);
    if (*sample) return cmd_sample(sample_args, config, out, err);
  } catch (const HorizonExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kHorizonRefusal;
  } catch (const InternalConsistencyError& e) {
    err << "internal consistency error: " << e.what() << '\n';
    return kInternalConsistency;
  } catch (const CacheError& e) {
    err << "corrupt cache: " << e.what() << '\n';
    return kInternalConsistency;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace rencontres::cli
