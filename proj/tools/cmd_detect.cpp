#include "commands.hpp"
#include "log.hpp"

#include "ciota/agent.hpp"
#include "ciota/errors.hpp"
#include "ciota/model_codec.hpp"
#include "ciota/traces.hpp"

#include <fstream>
#include <sstream>

namespace ciota::cli {

int cmd_detect(const ExperimentConfig& config) {
  const json& d = config.section("detect");
  const std::string trace_path = d.at("trace").get<std::string>();
  if (trace_path.empty()) throw ConfigError("detect.trace path is required");
  const std::vector<TraceRecord> trace = read_trace(trace_path);

  std::vector<std::uint8_t> mask;
  const std::string labels_path = d.at("labels").get<std::string>();
  if (!labels_path.empty()) {
    mask = read_labels(labels_path);
    if (mask.size() != trace.size()) {
      throw ConfigError("labels and trace differ in length");
    }
  }

  const auto grace_steps = d.at("grace_steps").get<std::size_t>();
  ModelParams params = config.model_params();
  // trace records carry no timestamps; one record advances time by one unit
  params.t_grace = static_cast<double>(grace_steps);

  AgentState agent("detector", params, config.protocol_params(),
                   config.app_id(), config.app_version());

  struct Row {
    std::uint64_t seq;      // as written in the trace file
    std::size_t position;   // dense index, aligns with the label mask
    Observation obs;
  };
  std::vector<Row> rows;
  rows.reserve(trace.size());
  std::vector<Alert> alerts;
  agent.alert_sink = [&](const Alert& alert) { alerts.push_back(alert); };

  for (std::size_t position = 0; position < trace.size(); ++position) {
    const TraceRecord& record = trace[position];
    agent.observation_sink = [&](const Observation& obs) {
      rows.push_back({record.seq, position, obs});
    };
    const std::uint64_t address[] = {record.address};
    // one record is one time unit, whatever the file's seq values are
    monitor_batch(agent, address, static_cast<Timestamp>(position));
  }

  ensure_out_dir(config.out_dir());

  std::ostringstream alert_csv;
  alert_csv << alert_csv_header() << '\n';
  for (const Alert& alert : alerts) alert_csv << alert_csv_line(alert) << '\n';
  write_text_file(config.out_dir() + "/alerts.csv", alert_csv.str());

  std::ostringstream score_csv;
  score_csv << "seq,score,label,grace,alerted\n";
  for (const Row& row : rows) {
    const int label = mask.empty() ? 0 : mask[row.position];
    score_csv << row.seq << ',' << row.obs.score << ',' << label << ','
              << (row.obs.in_grace ? 1 : 0) << ',' << (row.obs.alerted ? 1 : 0)
              << '\n';
  }
  write_text_file(config.out_dir() + "/scores.csv", score_csv.str());

  json summary{{"config", config.doc()}};
  summary["results"] = {
      {"records", trace.size()},
      {"alerts", alerts.size()},
      {"model_entries", agent.local_model.entry_count()},
      {"model_total", agent.local_model.total()},
  };

  if (!mask.empty()) {
    // judge only post-grace transitions, where the detector actually alerts
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (const Row& row : rows) {
      if (row.obs.in_grace) continue;
      scores.push_back(row.obs.score);
      labels.push_back(mask[row.position]);
    }
    if (!scores.empty()) {
      EvalResult result = evaluate(scores, labels, params.p_thr);
      summary["results"]["eval"] = eval_result_to_json(result);
      write_roc_csv(config.out_dir() + "/roc.csv", result);
    }
  }

  const std::string model_out = d.at("model_out").get<std::string>();
  if (!model_out.empty()) {
    const Bytes bytes = serialize_model(agent.local_model);
    std::ofstream out(model_out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + model_out);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    json meta{{"app_id", config.app_id()},
              {"app_version", config.app_version()},
              {"scheme", "CIOTAEMM v1"}};
    write_json_file(model_out + ".meta.json", meta);
  }

  write_json_file(config.out_dir() + "/detect.json", summary);
  log_info("detect: %zu records, %zu alerts, model has %zu transitions",
           trace.size(), alerts.size(), agent.local_model.entry_count());
  return 0;
}

} // namespace ciota::cli
