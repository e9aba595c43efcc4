#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coinlab::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kUsage = 2,
  kInfeasible = 3,
};

/// Fully parsed command line. Text-valued fields (grids, ranges) keep the
/// user's spelling; they are interpreted when the command runs.
struct RunConfig {
  std::string subcommand;  // analyze | coin | verify | closure | rounding | sweep

  // Global flags.
  std::string format;  // csv | json; empty selects the subcommand default
  std::optional<double> tolerance;
  int jobs = 0;  // 0 keeps the OpenMP default
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> seed_last;  // --seed a..b

  // Positional: function spec (analyze, coin), suite (verify), template (sweep).
  std::string target;

  std::string eps_grid;  // "a:b:k" or "x,y,z"
  std::vector<std::string> targets;
  std::string class_spec;  // "maj:9+restriction"
  std::optional<int> exhaustive_n;
  std::string n;  // integer, or start:stop:step for sweep
  int w = 3;
  int level = 3;
  int top = 10;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> trials;
  std::size_t cap = 1'000'000;
  bool skip_signs = false;
  std::optional<double> B;
  std::optional<double> eps0;
  std::optional<double> allowance;
  double delta = 0.01;
  double log_base = 2.0;
  std::string eps_list;
  std::string csv_path;  // per-member / per-sample CSV side output

  // Argument vector that parses back to an equal config.
  std::vector<std::string> canonical_args() const;
  // The same, joined by spaces.
  std::string canonical() const;
  bool operator==(const RunConfig&) const = default;
};

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kOk;  // meaningful when config is empty (help or error)
  std::string message;
};

// Arguments exclude the program name.
ParseResult parse_args(const std::vector<std::string>& args);

// "a:b:k" gives k evenly spaced points in [a, b]; otherwise a comma list.
std::vector<double> parse_grid(std::string_view text);

int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coinlab::cli
