#include "commands.hpp"
#include "log.hpp"

#include "ciota/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string preset;
  long long seed = -1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--set", flags.overrides,
                  "Override a config value, e.g. --set sim.n_agents=100");
  cmd->add_option("--preset", flags.preset,
                  "Named parameter preset (currently: paper)");
  cmd->add_option("--seed", flags.seed, "Override the base seed");
  cmd->add_option("--out", flags.out_dir, "Output directory");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ciota: collaborative control-flow anomaly detection toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  using Runner = int (*)(const ciota::cli::ExperimentConfig&);
  struct Sub {
    const char* name;
    const char* help;
    Runner runner;
  };
  const Sub subs[] = {
      {"simulate", "Run seeded protocol simulations over a topology",
       ciota::cli::cmd_simulate},
      {"trace-gen", "Generate a synthetic jump trace, optionally with an attack",
       ciota::cli::cmd_trace_gen},
      {"detect", "Run the detector over a trace file and score it",
       ciota::cli::cmd_detect},
      {"eval", "Compute AUC / average precision for a score file",
       ciota::cli::cmd_eval},
      {"combine", "Merge model files with abnormality filtration",
       ciota::cli::cmd_combine},
  };

  Runner selected = nullptr;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, flags);
    cmd->callback([&selected, runner = sub.runner]() { selected = runner; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = ciota::cli::ExperimentConfig::load(
        flags.config_path, flags.overrides, flags.preset, flags.seed,
        flags.out_dir);
    return selected(config);
  } catch (const ciota::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
