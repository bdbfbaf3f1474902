#pragma once

// Named experiments: config validation, deterministic runs and CSV
// artifacts plus a manifest.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smcrep {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int invalid_config = 2;
inline constexpr int bottleneck = 3;
}  // namespace exit_code

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigValues = std::map<std::string, std::string>;

/// "key = value" lines; '#' starts a comment. Repeated keys are an error.
ConfigValues parse_config_text(std::string_view text);
ConfigValues read_config_file(const std::filesystem::path& path);

/// "exact", "recursion", "simulate", "ftable", "minismc", "crs".
const std::vector<std::string>& experiment_names();

/// Every key an experiment accepts, besides seed, threads and out.
const std::vector<std::string>& experiment_keys(const std::string& experiment);

struct ExperimentConfig {
  std::string experiment;
  ConfigValues values;
};

struct Artifact {
  std::string name;
  std::string content;
};

/// Runs the experiment in memory; the last artifact is manifest.json.
/// Throws ConfigError for bad keys or values and BottleneckError when a
/// partitioning run dies.
std::vector<Artifact> build_artifacts(const ExperimentConfig& config);

/// build_artifacts, then writes every artifact under `out`. Nothing is
/// written unless the whole run succeeds. Returns an exit_code value.
int run_experiment(const ExperimentConfig& config, const std::filesystem::path& out,
                   std::ostream& diagnostics);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace smcrep
