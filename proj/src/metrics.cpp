#include "creditworks/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "creditworks/csv.hpp"
#include "creditworks/errors.hpp"

namespace creditworks {
namespace {

Score ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

ConfusionMatrix oriented(const ConfusionMatrix& cm, int cls) {
  if (cls != 0 && cls != 1) throw DomainError("class must be 0 or 1");
  return cls == 1 ? cm : cm.swapped();
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true,
                          std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DimensionError("confusion: label vectors differ in length");
  }
  if (y_true.empty()) throw DimensionError("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw DomainError("confusion: labels must be 0 or 1");
    }
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn)++;
    } else {
      (p == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

Score precision(const ConfusionMatrix& cm, int cls) {
  const auto c = oriented(cm, cls);
  return ratio(c.tp, c.tp + c.fp);
}

Score recall(const ConfusionMatrix& cm, int cls) {
  const auto c = oriented(cm, cls);
  return ratio(c.tp, c.tp + c.fn);
}

Score harmonic_f1(Score p, Score r) {
  const double sum = p.value + r.value;
  if (sum == 0.0) return {0.0, true};
  return {2.0 * p.value * r.value / sum, p.degenerate || r.degenerate};
}

Score f1(const ConfusionMatrix& cm, int cls) {
  return harmonic_f1(precision(cm, cls), recall(cm, cls));
}

Score specificity(const ConfusionMatrix& cm) { return ratio(cm.tn, cm.fp + cm.tn); }

ClassificationReport report(std::span<const int> y_true,
                            std::span<const int> y_pred) {
  ClassificationReport r;
  r.matrix = confusion(y_true, y_pred);
  const auto& cm = r.matrix;
  r.classes[0].support = cm.tn + cm.fp;
  r.classes[1].support = cm.tp + cm.fn;
  for (int cls : {0, 1}) {
    auto& s = r.classes[static_cast<std::size_t>(cls)];
    s.precision = precision(cm, cls);
    s.recall = recall(cm, cls);
    s.f1 = f1(cm, cls);
  }
  const auto total = static_cast<double>(cm.total());
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / total;
  const double w0 = static_cast<double>(r.classes[0].support) / total;
  const double w1 = static_cast<double>(r.classes[1].support) / total;
  const auto& c0 = r.classes[0];
  const auto& c1 = r.classes[1];
  r.macro = {(c0.precision.value + c1.precision.value) / 2.0,
             (c0.recall.value + c1.recall.value) / 2.0,
             (c0.f1.value + c1.f1.value) / 2.0};
  r.weighted = {w0 * c0.precision.value + w1 * c1.precision.value,
                w0 * c0.recall.value + w1 * c1.recall.value,
                w0 * c0.f1.value + w1 * c1.f1.value};
  r.specificity = specificity(cm);
  return r;
}

std::string render_report(const ClassificationReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %9s %14s %17s\n", "", "0.0",
                "1.0", "Accuracy", "Macro Average", "Weighted Average");
  out += line;
  const auto row = [&](const char* name, Score s0, Score s1, double macro,
                       double weighted) {
    std::snprintf(line, sizeof(line), "%-10s %8.2f %8.2f %9.2f %14.2f %17.2f\n",
                  name, s0.value, s1.value, r.accuracy, macro, weighted);
    out += line;
  };
  const auto& c0 = r.classes[0];
  const auto& c1 = r.classes[1];
  row("Precision", c0.precision, c1.precision, r.macro.precision,
      r.weighted.precision);
  row("Recall", c0.recall, c1.recall, r.macro.recall, r.weighted.recall);
  row("f1-score", c0.f1, c1.f1, r.macro.f1, r.weighted.f1);
  std::snprintf(line, sizeof(line), "%-10s %8zu %8zu\n", "Support", c0.support,
                c1.support);
  out += line;
  std::snprintf(line, sizeof(line),
                "\nConfusion matrix (rows actual, columns predicted)\n"
                "%-10s %8zu %8zu\n%-10s %8zu %8zu\n",
                "0.0", r.matrix.tn, r.matrix.fp, "1.0", r.matrix.fn, r.matrix.tp);
  out += line;
  for (const auto* s : {&c0.precision, &c0.recall, &c0.f1, &c1.precision,
                        &c1.recall, &c1.f1}) {
    if (s->degenerate) {
      out += "\nNote: some scores had a zero denominator and are shown as 0.00\n";
      break;
    }
  }
  return out;
}

RocCurve roc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw DimensionError("roc: labels and scores differ in length");
  }
  std::size_t positives = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] != 0 && y_true[i] != 1) throw DomainError("roc: labels must be 0 or 1");
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
      throw DomainError("roc: scores must lie in [0, 1]");
    }
    positives += static_cast<std::size_t>(y_true[i]);
  }
  const std::size_t negatives = y_true.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DomainError("roc: AUC is undefined with a single class");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  const auto P = static_cast<double>(positives);
  const auto N = static_cast<double>(negatives);
  std::uint64_t tp = 0, fp = 0;
  // Twice the area in count units: sum of dFP * (TP_prev + TP_next).
  std::uint64_t doubled_area = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    const std::uint64_t tp_prev = tp, fp_prev = fp;
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (y_true[order[i]] == 1 ? tp : fp)++;
    }
    doubled_area += (fp - fp_prev) * (tp + tp_prev);
    curve.points.push_back(
        {static_cast<double>(fp) / N, static_cast<double>(tp) / P});
  }
  curve.auc = static_cast<double>(doubled_area) / (2.0 * P * N);
  return curve;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) {
    out << csv::format_double(p.fpr) << ',' << csv::format_double(p.tpr) << '\n';
  }
}

}  // namespace creditworks
