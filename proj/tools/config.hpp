#pragma once

#include "ciota/agent.hpp"
#include "ciota/emm.hpp"
#include "ciota/simnet.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ciota::cli {

using nlohmann::json;

/// Experiment configuration: defaults, overlaid with a JSON config file,
/// overlaid with --set key=value flags. The resolved document is echoed
/// into every JSON output for reproducibility.
class ExperimentConfig {
public:
  static json defaults();

  /// Build from an optional config file, dotted-path overrides
  /// ("sim.n_agents=100"), an optional preset name, and optional seed /
  /// output directory flags. Throws ConfigError on anything malformed.
  static ExperimentConfig load(const std::string& config_path,
                               const std::vector<std::string>& overrides,
                               const std::string& preset, long long seed,
                               const std::string& out_dir);

  const json& doc() const { return doc_; }

  ModelParams model_params() const;
  ProtocolParams protocol_params() const;
  SimConfig sim_config() const;

  std::uint64_t seed() const { return doc_.at("seed").get<std::uint64_t>(); }
  std::size_t trials() const { return doc_.at("trials").get<std::size_t>(); }
  std::string out_dir() const { return doc_.at("io").at("out_dir"); }
  std::string app_id() const { return doc_.at("app").at("id"); }
  std::string app_version() const { return doc_.at("app").at("version"); }

  const json& section(const std::string& name) const { return doc_.at(name); }

private:
  explicit ExperimentConfig(json doc) : doc_(std::move(doc)) {}

  json doc_;
};

/// Parameter set used throughout the original experiments: a one-minute
/// share interval, blocks of 20 records, p_a 25%, alpha 0.05, score
/// threshold 0.012, a 10,000-entry window and 256-byte regions.
json paper_preset();

void apply_dotted_override(json& doc, const std::string& key_value);

} // namespace ciota::cli
