#include "config.hpp"
#include "log.hpp"

#include "ciota/errors.hpp"

#include <fstream>

namespace ciota::cli {

json ExperimentConfig::defaults() {
  return json{
      {"seed", 1},
      {"trials", 1},
      {"app", {{"id", "target-app"}, {"version", "1"}}},
      {"io", {{"out_dir", "out"}}},
      {"model",
       {{"region_size_bytes", 256},
        {"window_k", 10000},
        {"p_thr", 0.012},
        {"p_a", 0.25},
        {"alpha", 0.05},
        {"t_grace", 0.0}}},
      {"protocol",
       {{"block_size", 20},
        {"k_dm", 1},
        {"report_factor", 2.0},
        {"share_interval", 60.0}}},
      {"sim",
       {{"n_agents", 100},
        {"generator", "complete"},
        {"ws_neighbors", 5},
        {"ws_rewire_p", 0.1},
        {"ba_attachment", 1},
        {"jitter", 0.1},
        {"fanout", 0},
        {"max_epochs", 10000},
        {"blocks_to_close", 1},
        {"direct_messaging", true},
        {"peer_budget", 0},
        {"fidelity", "abstract"},
        {"gt_regions", 8},
        {"gt_out_degree", 2},
        {"train_steps", 4000},
        {"scenario",
         {{"kind", "none"},
          {"poisoned_fraction", 0.0},
          {"poison_count", 200},
          {"late_count", 0},
          {"join_epoch", 1}}}}},
      {"trace_gen",
       {{"generator", "uniform"},
        {"regions", 8},
        {"out_degree", 2},
        {"gt_seed", 1},
        {"length", 100000},
        {"attack",
         {{"kind", "none"}, {"start_index", 0}, {"length", 0}, {"seed", 0}}}}},
      {"detect",
       {{"trace", ""},
        {"labels", ""},
        {"grace_steps", 0},
        {"model_out", ""}}},
      {"eval", {{"scores", ""}, {"labels", ""}}},
      {"combine", {{"models", json::array()}, {"reference", ""}}},
  };
}

json paper_preset() {
  return json{
      {"model",
       {{"region_size_bytes", 256},
        {"window_k", 10000},
        {"p_thr", 0.012},
        {"p_a", 0.25},
        {"alpha", 0.05}}},
      {"protocol", {{"block_size", 20}, {"share_interval", 60.0}}},
  };
}

namespace {

json parse_override_value(const std::string& text) {
  // numbers, booleans, null, arrays parse as JSON; anything else is a string
  json parsed = json::parse(text, nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  return json(text);
}

} // namespace

void apply_dotted_override(json& doc, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value: " +
                      key_value);
  }
  const std::string path = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string part = path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (part.empty()) throw ConfigError("empty path segment in: " + path);
    if (dot == std::string::npos) {
      (*node)[part] = parse_override_value(value);
      return;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) {
      (*node)[part] = json::object();
    }
    node = &(*node)[part];
    begin = dot + 1;
  }
}

ExperimentConfig ExperimentConfig::load(const std::string& config_path,
                                        const std::vector<std::string>& overrides,
                                        const std::string& preset,
                                        long long seed,
                                        const std::string& out_dir) {
  json doc = defaults();

  if (!preset.empty()) {
    if (preset != "paper") throw ConfigError("unknown preset: " + preset);
    doc.merge_patch(paper_preset());
  }

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded()) {
      throw ConfigError("config file is not valid JSON: " + config_path);
    }
    doc.merge_patch(file);
  }

  for (const std::string& kv : overrides) apply_dotted_override(doc, kv);
  if (seed >= 0) doc["seed"] = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) doc["io"]["out_dir"] = out_dir;

  ExperimentConfig config(std::move(doc));
  if (!config.model_params().validate()) { // also surfaces range errors early
    log_warn("region_size_bytes %llu is not a power of two",
             static_cast<unsigned long long>(
                 config.model_params().region_size_bytes));
  }
  return config;
}

ModelParams ExperimentConfig::model_params() const {
  const json& m = doc_.at("model");
  ModelParams params;
  try {
    params.region_size_bytes = m.at("region_size_bytes").get<std::uint64_t>();
    params.window_k = m.at("window_k").get<std::size_t>();
    params.p_thr = m.at("p_thr").get<double>();
    params.p_a = m.at("p_a").get<double>();
    params.alpha = m.at("alpha").get<double>();
    params.t_grace = m.at("t_grace").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model section: ") + e.what());
  }
  return params;
}

ProtocolParams ExperimentConfig::protocol_params() const {
  const json& p = doc_.at("protocol");
  ProtocolParams params;
  try {
    params.block_size = p.at("block_size").get<std::size_t>();
    params.k_dm = p.at("k_dm").get<int>();
    params.report_factor = p.at("report_factor").get<double>();
    params.share_interval = p.at("share_interval").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad protocol section: ") + e.what());
  }
  if (params.block_size == 0) throw ConfigError("block_size must be positive");
  if (params.k_dm < 1) throw ConfigError("k_dm must be at least 1");
  return params;
}

SimConfig ExperimentConfig::sim_config() const {
  const json& s = doc_.at("sim");
  SimConfig config;
  try {
    config.n_agents = s.at("n_agents").get<std::size_t>();
    config.block_size = protocol_params().block_size;
    config.share_interval = protocol_params().share_interval;
    config.jitter = s.at("jitter").get<double>();
    config.fanout = s.at("fanout").get<std::size_t>();
    config.seed = seed();
    config.k_dm = protocol_params().k_dm;
    config.alpha = model_params().alpha;
    config.p_a = model_params().p_a;
    config.report_factor = protocol_params().report_factor;
    config.direct_messaging = s.at("direct_messaging").get<bool>();
    config.max_epochs = s.at("max_epochs").get<std::size_t>();
    config.blocks_to_close = s.at("blocks_to_close").get<std::size_t>();
    config.peer_budget = s.at("peer_budget").get<int>();
    const std::string fidelity = s.at("fidelity").get<std::string>();
    if (fidelity == "abstract") {
      config.fidelity = ModelFidelity::abstract_model;
    } else if (fidelity == "concrete") {
      config.fidelity = ModelFidelity::concrete_model;
    } else {
      throw ConfigError("fidelity must be abstract or concrete");
    }
    config.gt_regions = s.at("gt_regions").get<std::size_t>();
    config.gt_out_degree = s.at("gt_out_degree").get<std::size_t>();
    config.train_steps = s.at("train_steps").get<std::size_t>();

    const json& sc = s.at("scenario");
    const std::string kind = sc.at("kind").get<std::string>();
    if (kind == "none") {
      config.scenario.kind = Scenario::Kind::none;
    } else if (kind == "poisoned_agents") {
      config.scenario.kind = Scenario::Kind::poisoned_agents;
    } else if (kind == "late_join") {
      config.scenario.kind = Scenario::Kind::late_join;
    } else if (kind == "no_direct_messaging") {
      config.scenario.kind = Scenario::Kind::no_direct_messaging;
    } else {
      throw ConfigError("unknown scenario kind: " + kind);
    }
    config.scenario.poisoned_fraction =
        sc.at("poisoned_fraction").get<double>();
    config.scenario.poison_count = sc.at("poison_count").get<Count>();
    config.scenario.late_count = sc.at("late_count").get<std::size_t>();
    config.scenario.join_epoch = sc.at("join_epoch").get<std::uint32_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad sim section: ") + e.what());
  }
  if (config.scenario.poisoned_fraction < 0.0 ||
      config.scenario.poisoned_fraction > 1.0) {
    throw ConfigError("poisoned_fraction must be in [0,1]");
  }
  return config;
}

} // namespace ciota::cli
