#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ciota::cli {

void ensure_out_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_json_file(const std::string& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

json eval_result_to_json(const EvalResult& result) {
  json doc{
      {"threshold", result.threshold},
      {"fpr", result.fpr},
      {"n_attack", result.n_attack},
      {"n_benign", result.n_benign},
  };
  doc["tpr"] = result.tpr.has_value() ? json(*result.tpr) : json(nullptr);
  doc["auc"] = result.auc.has_value() ? json(*result.auc) : json(nullptr);
  doc["average_precision"] = result.average_precision.has_value()
                                 ? json(*result.average_precision)
                                 : json(nullptr);
  return doc;
}

void write_roc_csv(const std::string& path, const EvalResult& result) {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  for (const auto& point : result.roc) {
    out << point.threshold << ',' << point.fpr << ',' << point.tpr << '\n';
  }
  write_text_file(path, out.str());
}

} // namespace ciota::cli
