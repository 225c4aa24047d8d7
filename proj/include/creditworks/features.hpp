#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creditworks/dataset.hpp"

namespace creditworks {

struct Correlation {
  double r = 0.0;
  // False when either input has zero variance; r is then reported as 0.
  bool defined = true;
};

// Pearson product-moment coefficient (sample moments). Throws
// DimensionError for unequal lengths or fewer than 2 points.
Correlation pearson(std::span<const double> x, std::span<const double> y);
Correlation pearson(std::span<const double> x, std::span<const int> y);

struct CorrelationEntry {
  std::string feature;
  double r = 0.0;
  bool defined = true;
};

// One entry per column, sorted by r descending; ties keep column order.
struct CorrelationReport {
  std::vector<CorrelationEntry> entries;
};

CorrelationReport correlation_report(const DesignMatrix& m);

// CSV with header "feature,r".
void write_correlation_csv(std::ostream& out, const CorrelationReport& report);

// Population mean/stddev per column; stddev == 0 columns pass through.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool passthrough(std::size_t col) const { return !(stddev[col] > 0.0); }
  std::size_t size() const { return mean.size(); }
  void apply_in_place(std::span<double> rows_major) const;
};

Scaler fit_scaler(const DesignMatrix& m);
DesignMatrix apply_scaler(const Scaler& s, const DesignMatrix& m);

// Exploration counts over a raw table.
struct ThresholdRule {
  std::string column;
  double greater_than = 0.0;
};

struct ThresholdCount {
  ThresholdRule rule;
  std::size_t count = 0;
  std::size_t evaluated = 0;  // rows with a value in the column
};

// Throws SchemaError if the column is absent or not numeric.
ThresholdCount count_above(const RawLoanTable& table, const ThresholdRule& rule);

struct GroupDefaultRate {
  std::string level;
  std::size_t loans = 0;
  std::size_t defaults = 0;
  double rate = 0.0;
};

// Charged-off share per level of a categorical column over terminal rows,
// levels in lexicographic order.
std::vector<GroupDefaultRate> default_rate_by(const RawLoanTable& table,
                                              std::string_view column);

}  // namespace creditworks
