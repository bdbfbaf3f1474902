// Command-line front end: one subcommand per experiment.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smcrep/experiments.hpp"

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::optional<std::string> graph;
  std::optional<unsigned> threads;
  std::string config;
  std::string out;
  std::vector<std::string> set;
};

int run(const std::string& name, const Flags& flags) {
  using namespace smcrep;
  ExperimentConfig config{name, {}};
  std::string out = flags.out;
  try {
    if (!flags.config.empty()) config.values = read_config_file(flags.config);
    if (auto it = config.values.find("experiment"); it != config.values.end()) {
      if (it->second != name) throw ConfigError("config file is for experiment " + it->second + ", not " + name);
      config.values.erase(it);
    }
    if (auto it = config.values.find("out"); it != config.values.end()) {
      if (out.empty()) out = it->second;
      config.values.erase(it);
    }
    for (const auto& item : flags.set) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + item + "'");
      config.values[item.substr(0, eq)] = item.substr(eq + 1);
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return exit_code::invalid_config;
  }
  if (flags.seed) config.values["seed"] = std::to_string(*flags.seed);
  if (flags.trials) config.values["trials"] = std::to_string(*flags.trials);
  if (flags.graph) config.values["graph"] = *flags.graph;
  if (flags.threads) config.values["threads"] = std::to_string(*flags.threads);
  if (out.empty()) out = "results/" + name;

  const int code = run_experiment(config, out, std::cerr);
  if (code == exit_code::ok) std::cout << name << ": wrote " << out << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ancestor collapse and district repetition experiments", "smcrep"};
  app.set_version_flag("--version", SMCREP_VERSION);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"exact", "exact A(S,k) table and transition matrix"},
      {"recursion", "bounding sequences a_{S,i} and b_i"},
      {"simulate", "Monte Carlo descendancy diagrams"},
      {"ftable", "lowest mega-ancestor level on coalescence-grown diagrams"},
      {"minismc", "sequential graph partitioner with resampling"},
      {"crs", "controlled repetition sampler CLT harness"},
  };
  Flags flags;
  std::string chosen;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--seed", flags.seed, "64-bit seed");
    sub->add_option("--trials", flags.trials, "trial count");
    sub->add_option("--graph", flags.graph, "grid:RxC, path:N, cycle:N, complete:N or an edge-list file");
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
    sub->add_option("--config", flags.config, "key = value file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (default results/<experiment>)");
    sub->add_option("--set", flags.set, "key=value override, repeatable");
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return smcrep::exit_code::invalid_config;
  }
  return run(chosen, flags);
}
