#include "commands.hpp"

#include "ciota/errors.hpp"

#include <fstream>
#include <sstream>

namespace ciota::cli {

namespace {

/// scores file: CSV with a header whose first two columns are seq,score;
/// an optional third column is the label. Lines starting with '#' skipped.
void read_scores_csv(const std::string& path, std::vector<double>& scores,
                     std::vector<std::uint8_t>& labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scores file: " + path);
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      header_done = true; // first non-comment line is the header
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ','); // seq, unused
    if (!std::getline(row, cell, ',')) continue;
    scores.push_back(std::stod(cell));
    if (std::getline(row, cell, ',')) {
      labels.push_back(static_cast<std::uint8_t>(std::stoi(cell)));
    }
  }
}

} // namespace

int cmd_eval(const ExperimentConfig& config) {
  const json& e = config.section("eval");
  const std::string scores_path = e.at("scores").get<std::string>();
  if (scores_path.empty()) throw ConfigError("eval.scores path is required");

  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  read_scores_csv(scores_path, scores, labels);

  const std::string labels_path = e.at("labels").get<std::string>();
  if (!labels_path.empty()) {
    labels.assign(scores.size(), 0);
    std::ifstream in(labels_path);
    if (!in) throw std::runtime_error("cannot open labels file: " + labels_path);
    std::string line;
    std::size_t i = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!saw_header && line.find("label") != std::string::npos) {
        saw_header = true;
        continue;
      }
      const auto comma = line.find(',');
      const std::string value =
          comma == std::string::npos ? line : line.substr(comma + 1);
      if (i < labels.size()) labels[i++] = std::stoi(value) != 0;
    }
  }
  if (labels.size() != scores.size()) {
    throw ConfigError("eval needs a label per score");
  }

  EvalResult result = evaluate(scores, labels, config.model_params().p_thr);

  ensure_out_dir(config.out_dir());
  json summary{{"config", config.doc()},
               {"results", eval_result_to_json(result)}};
  write_json_file(config.out_dir() + "/eval.json", summary);
  write_roc_csv(config.out_dir() + "/roc.csv", result);
  return 0;
}

} // namespace ciota::cli
