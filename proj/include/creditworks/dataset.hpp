#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace creditworks {

enum class ColumnKind { numeric, categorical, text, date };
enum class ColumnRole { feature, target, exposure_aux, drop };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  ColumnRole role = ColumnRole::feature;

  bool operator==(const ColumnSpec&) const = default;
};

std::string_view to_string(ColumnKind kind);
std::string_view to_string(ColumnRole role);
ColumnKind parse_column_kind(std::string_view text);
ColumnRole parse_column_role(std::string_view text);

// Checks the schema invariants: unique names, exactly one target column.
// Throws SchemaError.
void validate_schema(std::span<const ColumnSpec> schema);

// A parsed cell: missing, a number (numeric columns) or text (every other
// kind).
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& cell) {
  return std::holds_alternative<std::monostate>(cell);
}

// Parses a numeric cell. Surrounding whitespace and a trailing "%" or
// "month(s)" unit are accepted; anything else unparseable yields nullopt.
std::optional<double> parse_numeric(std::string_view text);

struct RawLoanTable {
  std::vector<ColumnSpec> schema;
  std::vector<std::vector<Cell>> rows;
  // 1-based data-row number in the source file, carried through filtering.
  std::vector<std::size_t> source_rows;

  std::size_t row_count() const { return rows.size(); }
  std::optional<std::size_t> find_column(std::string_view name) const;
  // Throws SchemaError when absent.
  std::size_t column_index(std::string_view name) const;
  std::size_t target_index() const;
  std::size_t missing_cells() const;
};

struct LoadOptions {
  // When false, every header column must be listed in the spec. When true,
  // unlisted header columns are skipped at load time (real loan exports
  // carry well over a hundred columns).
  bool ignore_unlisted_columns = false;
};

// Reads a CSV with a header row. Spec columns absent from the header, or
// (unless ignored) header columns absent from the spec, raise SchemaError.
// Records whose field count differs from the header raise ParseError.
RawLoanTable load_csv(std::istream& source, std::span<const ColumnSpec> spec,
                      const LoadOptions& options = {});
RawLoanTable load_csv_text(std::string_view text,
                           std::span<const ColumnSpec> spec,
                           const LoadOptions& options = {});

// Loan-status labels. "Does not meet the credit policy. Status:<x>" rows
// map like <x>.
inline constexpr std::string_view kFullyPaid = "Fully Paid";
inline constexpr std::string_view kChargedOff = "Charged Off";

// 0 for Fully Paid, 1 for Charged Off, nullopt for any non-terminal status.
std::optional<int> terminal_label(std::string_view status);

// Keeps Fully Paid / Charged Off rows and rewrites their status to the
// canonical label. Throws DataError when nothing remains.
RawLoanTable filter_terminal(const RawLoanTable& table);

inline constexpr std::array<std::string_view, 5> kDefaultDropColumns = {
    "emp_title", "emp_length", "grade", "issue_d", "title"};

// Throws SchemaError for an unknown name and DataError when no feature
// column would remain.
RawLoanTable drop_columns(const RawLoanTable& table,
                          std::span<const std::string> names);

// Drops every column whose role is `drop`.
RawLoanTable drop_role_columns(const RawLoanTable& table);

enum class MissingPolicy { drop_row, fill_median_or_mode };

MissingPolicy parse_missing_policy(std::string_view text);

// drop_row removes rows with any missing cell. fill_median_or_mode fills
// numeric columns with the median and every other kind with the most
// frequent value (ties: lexicographically smallest). Throws DataError on an
// empty table or an entirely missing column under the fill policy.
RawLoanTable handle_missing(const RawLoanTable& table, MissingPolicy policy);

struct DesignMatrix {
  std::vector<std::string> columns;
  std::vector<double> x;  // row-major n_rows x n_cols
  std::vector<int> y;     // 1 = default
  std::vector<std::string> row_ids;

  std::size_t n_rows() const { return y.size(); }
  std::size_t n_cols() const { return columns.size(); }
  std::span<const double> row(std::size_t r) const {
    return {x.data() + r * n_cols(), n_cols()};
  }
  // Throws DataError on shape mismatch, non-binary y, or non-finite x.
  void validate() const;
  DesignMatrix select_rows(std::span<const std::size_t> rows) const;
};

struct DummyMapping {
  std::string column;
  std::string baseline;
  std::vector<std::string> levels;   // non-baseline levels, sorted
  std::vector<std::string> outputs;  // "<column>=<level>"
};

struct EncodeReport {
  std::vector<std::string> dropped_zero_variance;
  std::vector<std::string> skipped_non_numeric;
  std::vector<DummyMapping> dummies;
};

struct Encoded {
  DesignMatrix matrix;
  EncodeReport report;
};

// Numeric features pass through; a categorical feature with k levels
// becomes k-1 dummy columns named "<col>=<value>" with the
// lexicographically first level as baseline. Single-level categorical
// columns are dropped and reported; text/date features are reported and
// skipped. Row ids come from `id_column` when present in the schema,
// otherwise from the source row numbers.
Encoded encode(const RawLoanTable& table,
               std::string_view id_column = "id");

// Builds a matrix with exactly `columns` (as produced by encode on another
// table): numeric names read the column directly, "<col>=<value>" names
// become indicators. Throws DimensionError for a name that cannot be
// resolved. The target is filled when the status is terminal, else 0.
DesignMatrix encode_for_columns(const RawLoanTable& table,
                                std::span<const std::string> columns,
                                std::string_view id_column = "id");

struct SplitPair {
  DesignMatrix train;
  DesignMatrix test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
};

// Seeded Fisher-Yates permutation; the first round(test_fraction * n)
// (clamped to [1, n-1]) shuffled indices form the test half. Both halves
// keep source order.
SplitPair split(const DesignMatrix& matrix, double test_fraction,
                std::uint64_t seed);

struct ClassBalance {
  std::size_t count0 = 0;
  std::size_t count1 = 0;
  double w0 = 0.0;
  double w1 = 0.0;
};

ClassBalance class_balance(std::span<const int> y);

// CSV: id, feature columns, target.
void write_design_csv(std::ostream& out, const DesignMatrix& matrix);

}  // namespace creditworks
