#include "creditworks/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "creditworks/csv.hpp"
#include "creditworks/errors.hpp"
#include "creditworks/kernels.hpp"

namespace creditworks {

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw DimensionError("pearson: need at least 2 points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return {0.0, false};
  // The (n-1) factors of the sample moments cancel.
  const double r = sxy / std::sqrt(sxx * syy);
  return {std::clamp(r, -1.0, 1.0), true};
}

Correlation pearson(std::span<const double> x, std::span<const int> y) {
  std::vector<double> yd(y.begin(), y.end());
  return pearson(x, std::span<const double>(yd));
}

CorrelationReport correlation_report(const DesignMatrix& m) {
  if (m.n_rows() < 2) throw DataError("correlation_report: need >= 2 rows");
  CorrelationReport report;
  std::vector<double> column(m.n_rows());
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    for (std::size_t r = 0; r < m.n_rows(); ++r) column[r] = m.x[r * m.n_cols() + c];
    const auto corr = pearson(column, std::span<const int>(m.y));
    report.entries.push_back({m.columns[c], corr.r, corr.defined});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return a.r > b.r; });
  return report;
}

void write_correlation_csv(std::ostream& out, const CorrelationReport& report) {
  out << "feature,r\n";
  for (const auto& e : report.entries) {
    csv::write_row(out, {e.feature, csv::format_double(e.r)});
  }
}

void Scaler::apply_in_place(std::span<double> rows_major) const {
  std::vector<double> shift(size()), scale(size());
  for (std::size_t c = 0; c < size(); ++c) {
    shift[c] = passthrough(c) ? 0.0 : mean[c];
    scale[c] = passthrough(c) ? 1.0 : 1.0 / stddev[c];
  }
  kernels::shift_scale_rows(rows_major, size(), shift, scale);
}

Scaler fit_scaler(const DesignMatrix& m) {
  const std::size_t rows = m.n_rows(), cols = m.n_cols();
  Scaler s;
  s.mean.assign(cols, 0.0);
  s.stddev.assign(cols, 0.0);
  if (rows == 0) return s;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) s.mean[c] += m.x[r * cols + c];
  }
  for (auto& v : s.mean) v /= static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = m.x[r * cols + c] - s.mean[c];
      s.stddev[c] += d * d;
    }
  }
  for (auto& v : s.stddev) v = std::sqrt(v / static_cast<double>(rows));
  return s;
}

DesignMatrix apply_scaler(const Scaler& s, const DesignMatrix& m) {
  if (s.size() != m.n_cols()) throw DimensionError("scaler width mismatch");
  DesignMatrix out = m;
  s.apply_in_place(out.x);
  return out;
}

ThresholdCount count_above(const RawLoanTable& table, const ThresholdRule& rule) {
  const std::size_t c = table.column_index(rule.column);
  if (table.schema[c].kind != ColumnKind::numeric) {
    throw SchemaError("column '" + rule.column + "' is not numeric");
  }
  ThresholdCount result{rule, 0, 0};
  for (const auto& row : table.rows) {
    if (const auto* v = std::get_if<double>(&row[c])) {
      ++result.evaluated;
      if (*v > rule.greater_than) ++result.count;
    }
  }
  return result;
}

std::vector<GroupDefaultRate> default_rate_by(const RawLoanTable& table,
                                              std::string_view column) {
  const std::size_t c = table.column_index(column);
  const std::size_t target = table.target_index();
  std::map<std::string, GroupDefaultRate> groups;
  for (const auto& row : table.rows) {
    const auto* level = std::get_if<std::string>(&row[c]);
    const auto* status = std::get_if<std::string>(&row[target]);
    if (level == nullptr || status == nullptr) continue;
    const auto label = terminal_label(*status);
    if (!label) continue;
    auto& g = groups[*level];
    g.level = *level;
    ++g.loans;
    g.defaults += static_cast<std::size_t>(*label);
  }
  std::vector<GroupDefaultRate> out;
  for (auto& [level, g] : groups) {
    g.rate = static_cast<double>(g.defaults) / static_cast<double>(g.loans);
    out.push_back(g);
  }
  return out;
}

}  // namespace creditworks
