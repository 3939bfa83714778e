#pragma once

#include "ciota/eval.hpp"

#include "config.hpp"

namespace ciota::cli {

int cmd_simulate(const ExperimentConfig& config);
int cmd_trace_gen(const ExperimentConfig& config);
int cmd_detect(const ExperimentConfig& config);
int cmd_eval(const ExperimentConfig& config);
int cmd_combine(const ExperimentConfig& config);

// shared output helpers (outputs.cpp)
void ensure_out_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const json& doc);
json eval_result_to_json(const EvalResult& result);
void write_roc_csv(const std::string& path, const EvalResult& result);

} // namespace ciota::cli
