#pragma once

// The sdlab command surface, callable in-process. Every command returns an
// exit code: 0 success, 1 admissibility failure, 2 usage or config error.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdlab::cli {

enum ExitCode : int { kSuccess = 0, kInadmissible = 1, kUsage = 2 };

struct RunConfig {
  std::string structure = "sg";   // built-in name or JSON path
  int level_min = 1;
  int level_max = 4;
  std::string drift = "default";  // none | default | path to a drift JSON file
  std::vector<double> alpha;      // empty: lambda + 1
  std::vector<double> t{0.1};
  std::size_t paths = 10000;
  std::uint64_t seed = 20240607;
  std::filesystem::path out = "sdlab_out";
  std::string assumption = "A";   // A: (I)+(II), B: (I)+(III)
  std::optional<int> reference_level;  // default max(level_max + 1, 6)
  std::size_t start = 1;          // initial vertex id (p_2 on the gasket)
  std::size_t draws = 1000;       // random test functions per level in check
  std::uint64_t sample_seed = 20240607;  // seed of those test functions
  double semigroup_tail = 1e-12;

  int reference() const;
};

/// Parses "a:b" or "n" into a level range; throws ConfigError.
std::pair<int, int> parse_levels(std::string_view text);

/// Applies keys of a JSON run config on top of `base` (config overrides flags).
RunConfig apply_config_file(RunConfig base, const std::filesystem::path& path);

/// Throws ConfigError for inconsistent settings.
void validate(const RunConfig& config);

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_converge(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_resolvent(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_semigroup(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line (argv[0] included).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdlab::cli
