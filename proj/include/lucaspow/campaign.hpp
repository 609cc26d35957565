// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lucaspow/hpreal.hpp"
#include "lucaspow/sieve.hpp"

namespace lucaspow::campaign {

inline constexpr std::string_view kVersion = "0.1.0";

using Json = nlohmann::ordered_json;
using sieve::Range;

// Bad configuration. Maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command {
  identities,
  sieve,
  n1,
  reduce_walax,
  reduce_walay,
  legendre_wala,
  bounds,
  approx_check,
  minimal_s,
  cube_check,
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

// "a..b" or a single integer "a".
Range parse_range(std::string_view text);
std::string format_range(const Range& r);

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitPrecision = 3,
};

struct CampaignConfig {
  Command command = Command::identities;
  std::optional<Range> r_range;
  std::optional<Range> n_range;
  std::optional<Range> x_range;
  std::optional<Range> m_range;

  // Log-spaced sample of the r range; 0 takes every r.
  unsigned long r_samples = 0;

  Precision prec_min = PrecisionLadder{}.floor;
  Precision prec_max = PrecisionLadder{}.ceiling;
  unsigned workers = 1;
  std::filesystem::path out;  // empty: report goes to stdout
  std::string format = "json";

  std::string M;  // decimal or scientific, e.g. "3e17"; command default if empty
  int max_attempts = 128;

  unsigned long r_max_fallback = 10'000;
  unsigned prime_count = 20;
  bool control_x2 = false;
  bool all_m = false;

  unsigned long audit_samples = 10'000;
  unsigned long seed = 1;

  std::vector<long> zeta_n = {2, 10, 100};
  unsigned long s_max = 5000;

  // Throws ConfigError. Fills in command defaults for absent ranges.
  CampaignConfig resolved() const;
  PrecisionLadder ladder() const { return {prec_min, prec_max}; }
  mpz_class M_value() const;
};

struct CampaignReport {
  Json doc;          // {config, items, aggregate, meta}
  int exit_code = kExitOk;
  std::size_t item_count = 0;
};

// Configures, dispatches over `workers` threads and merges in grid order.
CampaignReport run(const CampaignConfig& config);

// Writes `report.doc` to `path` through a temporary file and rename.
void emit_report(const CampaignReport& report, const std::filesystem::path& path);

// Distinct integers in [lo, hi], roughly log-spaced, at least `count` of
// them when the interval is large enough. Always contains lo and hi.
std::vector<long> log_spaced(const Range& range, unsigned long count);

// Instance key "r=..,n=..,x=..,m=.." listing only the present components.
std::string instance_key(std::optional<long> r, std::optional<long> n = std::nullopt,
                         std::optional<long> x = std::nullopt,
                         std::optional<long> m = std::nullopt);

Json hp_json(const HPReal& v, Precision prec);

}  // namespace lucaspow::campaign
