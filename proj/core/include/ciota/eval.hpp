#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ciota {

/// Classifier metrics over anomaly scores. Convention throughout: a score
/// is a probability, LOW means anomalous, and label 1 marks an attack.
/// A sample is predicted positive (attack) at threshold t when score <= t,
/// so the ROC sweep walks thresholds in ascending score order.
struct EvalResult {
  std::optional<double> tpr; // undefined when the labels contain no attack
  double fpr = 0.0;
  std::optional<double> auc;               // needs both classes
  std::optional<double> average_precision; // needs at least one attack
  std::size_t n_attack = 0;
  std::size_t n_benign = 0;
  double threshold = 0.0;

  struct CurvePoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
  };
  std::vector<CurvePoint> roc;
};

/// Area under the ROC curve by trapezoidal integration over the threshold
/// sweep; tied scores earn half credit. Throws std::invalid_argument when
/// sizes differ or only one class is present.
double compute_auc(std::span<const double> scores,
                   std::span<const std::uint8_t> labels);

/// Average precision: precision weighted by recall increments over the
/// same sweep. Throws std::invalid_argument when sizes differ or no attack
/// is labeled.
double compute_avprc(std::span<const double> scores,
                     std::span<const std::uint8_t> labels);

/// Full evaluation at a fixed alert threshold (predicted attack when
/// score < threshold, matching the detector's alert rule), plus the
/// curve-based metrics when defined.
EvalResult evaluate(std::span<const double> scores,
                    std::span<const std::uint8_t> labels, double threshold);

} // namespace ciota
