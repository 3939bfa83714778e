#include "commands.hpp"

#include "ciota/emm.hpp"
#include "ciota/errors.hpp"
#include "ciota/model_codec.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ciota::cli {

namespace {

Bytes read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return Bytes(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
}

/// Side-car metadata written next to model files by `detect`.
std::string sidecar_app_id(const std::string& model_path) {
  const std::string meta_path = model_path + ".meta.json";
  if (!std::filesystem::exists(meta_path)) return {};
  std::ifstream in(meta_path);
  json meta = json::parse(in, nullptr, false);
  if (meta.is_discarded() || !meta.contains("app_id")) return {};
  return meta["app_id"].get<std::string>();
}

} // namespace

int cmd_combine(const ExperimentConfig& config) {
  const json& c = config.section("combine");
  const auto paths = c.at("models").get<std::vector<std::string>>();
  if (paths.size() < 2) {
    throw ConfigError("combine needs at least two model files");
  }

  std::string app_id;
  std::vector<FrequencyMatrix> models;
  models.reserve(paths.size());
  for (const std::string& path : paths) {
    models.push_back(deserialize_model(read_binary(path)));
    const std::string this_app = sidecar_app_id(path);
    if (this_app.empty()) continue;
    if (app_id.empty()) {
      app_id = this_app;
    } else if (app_id != this_app) {
      throw ConfigError("model files belong to different applications: " +
                        app_id + " vs " + this_app);
    }
  }

  const double p_a = config.model_params().p_a;
  const FrequencyMatrix combined = combine(models, p_a);

  // reference model for the distance report; defaults to the first input
  const std::string reference_path = c.at("reference").get<std::string>();
  const FrequencyMatrix reference =
      reference_path.empty() ? models.front()
                             : deserialize_model(read_binary(reference_path));

  const double scalar = distance(reference, combined);

  ensure_out_dir(config.out_dir());

  const Bytes bytes = serialize_model(combined);
  const std::string out_model = config.out_dir() + "/combined.model";
  {
    std::ofstream out(out_model, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!app_id.empty()) {
    write_json_file(out_model + ".meta.json",
                    json{{"app_id", app_id},
                         {"app_version", config.app_version()},
                         {"scheme", "CIOTAEMM v1"}});
  }

  // per-entry |M_ref - M_combined| over the union state grid: heat-map data
  const MarkovChain ref_chain = to_markov(reference);
  const MarkovChain comb_chain = to_markov(combined);
  std::set<State> states = reference.states();
  states.insert(combined.states().begin(), combined.states().end());

  std::ostringstream grid;
  grid << "src_state,dst_state,abs_diff\n";
  for (State row : states) {
    for (State col : states) {
      const double diff = std::abs(ref_chain.probability(row, col) -
                                   comb_chain.probability(row, col));
      grid << row << ',' << col << ',' << diff << '\n';
    }
  }
  write_text_file(config.out_dir() + "/distance_grid.csv", grid.str());

  json summary{
      {"config", config.doc()},
      {"results",
       {{"inputs", paths.size()},
        {"p_a", p_a},
        {"entries", combined.entry_count()},
        {"total_count", combined.total()},
        {"distance_to_reference", scalar},
        {"model", out_model},
        {"grid", config.out_dir() + "/distance_grid.csv"}}},
  };
  write_json_file(config.out_dir() + "/combine.json", summary);
  return 0;
}

} // namespace ciota::cli
