#include "commands.hpp"

#include "ciota/errors.hpp"
#include "ciota/traces.hpp"

namespace ciota::cli {

namespace {

GroundTruthModel build_ground_truth(const json& tg, std::uint64_t region_size) {
  const std::string generator = tg.at("generator").get<std::string>();
  const auto regions = tg.at("regions").get<std::size_t>();
  const auto gt_seed = tg.at("gt_seed").get<std::uint64_t>();
  if (generator == "cycle") return make_cycle_model(regions, region_size);
  if (generator == "uniform") {
    return make_uniform_model(regions, tg.at("out_degree").get<std::size_t>(),
                              gt_seed, region_size);
  }
  throw ConfigError("unknown trace generator: " + generator);
}

AttackSpec::Kind attack_kind(const std::string& name) {
  if (name == "code_injection") return AttackSpec::Kind::code_injection;
  if (name == "code_reuse") return AttackSpec::Kind::code_reuse;
  if (name == "replay_blip") return AttackSpec::Kind::replay_blip;
  throw ConfigError("unknown attack kind: " + name);
}

} // namespace

int cmd_trace_gen(const ExperimentConfig& config) {
  const json& tg = config.section("trace_gen");
  const GroundTruthModel gt =
      build_ground_truth(tg, config.model_params().region_size_bytes);

  auto trace =
      gen_benign_trace(gt, tg.at("length").get<std::size_t>(), config.seed());

  std::vector<std::uint8_t> mask(trace.size(), 0);
  const json& attack = tg.at("attack");
  const std::string kind = attack.at("kind").get<std::string>();
  if (kind != "none") {
    AttackSpec spec;
    spec.kind = attack_kind(kind);
    spec.start_index = attack.at("start_index").get<std::size_t>();
    spec.length = attack.at("length").get<std::size_t>();
    spec.seed = attack.at("seed").get<std::uint64_t>();
    LabeledTrace labeled = inject_attack(trace, spec, gt);
    trace = std::move(labeled.records);
    mask = std::move(labeled.mask);
  }

  ensure_out_dir(config.out_dir());
  write_trace(config.out_dir() + "/trace.csv", trace);
  write_labels(config.out_dir() + "/labels.csv", mask);

  json summary{
      {"config", config.doc()},
      {"results",
       {{"records", trace.size()},
        {"marked", std::count(mask.begin(), mask.end(), 1)},
        {"gt_min_transition_prob", gt.min_transition_prob()},
        {"trace", config.out_dir() + "/trace.csv"},
        {"labels", config.out_dir() + "/labels.csv"}}},
  };
  write_json_file(config.out_dir() + "/trace_gen.json", summary);
  return 0;
}

} // namespace ciota::cli
