#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace creditworks {

// Class 1 (default) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  // The same outcomes seen with class 0 as positive.
  ConfusionMatrix swapped() const { return {tn, tp, fn, fp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws DimensionError on length mismatch or empty input, DomainError on a
// label outside {0, 1}.
ConfusionMatrix confusion(std::span<const int> y_true,
                          std::span<const int> y_pred);

// A ratio whose denominator may be zero. Degenerate scores carry value 0.
struct Score {
  double value = 0.0;
  bool degenerate = false;
};

Score precision(const ConfusionMatrix& cm, int cls = 1);
Score recall(const ConfusionMatrix& cm, int cls = 1);
Score f1(const ConfusionMatrix& cm, int cls = 1);
// 2PR / (P + R); degenerate when P + R == 0 or either input is.
Score harmonic_f1(Score precision, Score recall);
Score specificity(const ConfusionMatrix& cm);

struct ClassScores {
  Score precision;
  Score recall;
  Score f1;
  std::size_t support = 0;
};

struct AveragedScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  ConfusionMatrix matrix;
  std::array<ClassScores, 2> classes;
  double accuracy = 0.0;
  AveragedScores macro;
  AveragedScores weighted;
  Score specificity;
};

ClassificationReport report(std::span<const int> y_true,
                            std::span<const int> y_pred);

// Plain-text table: rows Precision / Recall / f1-score, columns 0.0, 1.0,
// Accuracy, Macro Average, Weighted Average; two decimals.
std::string render_report(const ClassificationReport& r);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// One point per distinct score (thresholds from high to low, tied scores
// moved together) plus the (0, 0) origin. AUC is the trapezoidal area,
// accumulated in integer counts and divided once. Throws DomainError for a
// score outside [0, 1] or a single-class y_true.
RocCurve roc(std::span<const int> y_true, std::span<const double> scores);

// CSV with header "fpr,tpr".
void write_roc_csv(std::ostream& out, const RocCurve& curve);

}  // namespace creditworks
