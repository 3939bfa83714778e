#include "ciota/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace ciota {

namespace {

struct Sweep {
  // one entry per unique score, ascending; cumulative counts at or below it
  std::vector<double> thresholds;
  std::vector<std::size_t> cum_attack;
  std::vector<std::size_t> cum_benign;
  std::size_t n_attack = 0;
  std::size_t n_benign = 0;
};

Sweep make_sweep(std::span<const double> scores,
                 std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    rows.emplace_back(scores[i], labels[i]);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Sweep sweep;
  std::size_t attacks = 0;
  std::size_t benigns = 0;
  for (std::size_t i = 0; i < rows.size();) {
    const double value = rows[i].first;
    while (i < rows.size() && rows[i].first == value) {
      if (rows[i].second != 0) {
        ++attacks;
      } else {
        ++benigns;
      }
      ++i;
    }
    sweep.thresholds.push_back(value);
    sweep.cum_attack.push_back(attacks);
    sweep.cum_benign.push_back(benigns);
  }
  sweep.n_attack = attacks;
  sweep.n_benign = benigns;
  return sweep;
}

} // namespace

double compute_auc(std::span<const double> scores,
                   std::span<const std::uint8_t> labels) {
  const Sweep sweep = make_sweep(scores, labels);
  if (sweep.n_attack == 0 || sweep.n_benign == 0) {
    throw std::invalid_argument("auc needs both classes in the labels");
  }
  // trapezoid over the (fpr, tpr) polyline from (0,0) upward
  double auc = 0.0;
  double prev_fpr = 0.0;
  double prev_tpr = 0.0;
  for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
    const double fpr = static_cast<double>(sweep.cum_benign[i]) /
                       static_cast<double>(sweep.n_benign);
    const double tpr = static_cast<double>(sweep.cum_attack[i]) /
                       static_cast<double>(sweep.n_attack);
    auc += (fpr - prev_fpr) * (prev_tpr + tpr) / 2.0;
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  return auc;
}

double compute_avprc(std::span<const double> scores,
                     std::span<const std::uint8_t> labels) {
  const Sweep sweep = make_sweep(scores, labels);
  if (sweep.n_attack == 0) {
    throw std::invalid_argument("average precision needs at least one attack");
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
    const std::size_t predicted = sweep.cum_attack[i] + sweep.cum_benign[i];
    const double precision = static_cast<double>(sweep.cum_attack[i]) /
                             static_cast<double>(predicted);
    const double recall = static_cast<double>(sweep.cum_attack[i]) /
                          static_cast<double>(sweep.n_attack);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

EvalResult evaluate(std::span<const double> scores,
                    std::span<const std::uint8_t> labels, double threshold) {
  const Sweep sweep = make_sweep(scores, labels);

  EvalResult result;
  result.n_attack = sweep.n_attack;
  result.n_benign = sweep.n_benign;
  result.threshold = threshold;

  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0;
       i < sweep.thresholds.size() && sweep.thresholds[i] < threshold; ++i) {
    tp = sweep.cum_attack[i];
    fp = sweep.cum_benign[i];
  }
  if (sweep.n_attack > 0) {
    result.tpr = static_cast<double>(tp) / static_cast<double>(sweep.n_attack);
  }
  result.fpr = sweep.n_benign == 0 ? 0.0
                                   : static_cast<double>(fp) /
                                         static_cast<double>(sweep.n_benign);

  if (sweep.n_attack > 0 && sweep.n_benign > 0) {
    result.auc = compute_auc(scores, labels);
  }
  if (sweep.n_attack > 0) {
    result.average_precision = compute_avprc(scores, labels);
  }

  result.roc.reserve(sweep.thresholds.size());
  for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
    EvalResult::CurvePoint point;
    point.threshold = sweep.thresholds[i];
    point.fpr = sweep.n_benign == 0
                    ? 0.0
                    : static_cast<double>(sweep.cum_benign[i]) /
                          static_cast<double>(sweep.n_benign);
    point.tpr = sweep.n_attack == 0
                    ? 0.0
                    : static_cast<double>(sweep.cum_attack[i]) /
                          static_cast<double>(sweep.n_attack);
    result.roc.push_back(point);
  }
  return result;
}

} // namespace ciota
