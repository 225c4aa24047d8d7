#include "creditworks/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "creditworks/csv.hpp"
#include "creditworks/errors.hpp"
#include "creditworks/rng.hpp"

namespace creditworks {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::string cell_text(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* d = std::get_if<double>(&cell)) return csv::format_double(*d);
  return {};
}

// Ordering used for modes and category levels: numbers before strings,
// each in natural order. Only text cells occur in categorical columns, but
// the comparator keeps the fill logic kind-agnostic.
struct CellLess {
  bool operator()(const Cell& a, const Cell& b) const { return a < b; }
};

}  // namespace

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::text: return "text";
    case ColumnKind::date: return "date";
  }
  return "numeric";
}

std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::feature: return "feature";
    case ColumnRole::target: return "target";
    case ColumnRole::exposure_aux: return "exposure_aux";
    case ColumnRole::drop: return "drop";
  }
  return "feature";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  if (text == "text") return ColumnKind::text;
  if (text == "date") return ColumnKind::date;
  throw SchemaError("unknown column kind '" + std::string(text) + "'");
}

ColumnRole parse_column_role(std::string_view text) {
  if (text == "feature") return ColumnRole::feature;
  if (text == "target") return ColumnRole::target;
  if (text == "exposure_aux") return ColumnRole::exposure_aux;
  if (text == "drop") return ColumnRole::drop;
  throw SchemaError("unknown column role '" + std::string(text) + "'");
}

void validate_schema(std::span<const ColumnSpec> schema) {
  std::set<std::string_view> seen;
  std::size_t targets = 0;
  for (const auto& col : schema) {
    if (col.name.empty()) throw SchemaError("column spec with empty name");
    if (!seen.insert(col.name).second) {
      throw SchemaError("column '" + col.name + "' listed twice");
    }
    if (col.role == ColumnRole::target) ++targets;
  }
  if (targets != 1) {
    throw SchemaError("schema must have exactly one target column, found " +
                      std::to_string(targets));
  }
}

std::optional<double> parse_numeric(std::string_view text) {
  std::string_view s = trim(text);
  if (ends_with(s, "%")) {
    s = trim(s.substr(0, s.size() - 1));
  } else if (ends_with(s, "months")) {
    s = trim(s.substr(0, s.size() - 6));
  } else if (ends_with(s, "month")) {
    s = trim(s.substr(0, s.size() - 5));
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::size_t> RawLoanTable::find_column(
    std::string_view name) const {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t RawLoanTable::column_index(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw SchemaError("unknown column '" + std::string(name) + "'");
}

std::size_t RawLoanTable::target_index() const {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].role == ColumnRole::target) return i;
  }
  throw SchemaError("table has no target column");
}

std::size_t RawLoanTable::missing_cells() const {
  std::size_t count = 0;
  for (const auto& row : rows) {
    count += static_cast<std::size_t>(std::count_if(
        row.begin(), row.end(), [](const Cell& c) { return is_missing(c); }));
  }
  return count;
}

RawLoanTable load_csv_text(std::string_view text,
                           std::span<const ColumnSpec> spec,
                           const LoadOptions& options) {
  validate_schema(spec);
  csv::Reader reader(text);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError("missing header row", 1);

  // Strip a UTF-8 byte-order mark from the first header name.
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    fields[0].erase(0, 3);
  }
  const std::size_t width = fields.size();
  std::unordered_map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < width; ++i) {
    const std::string name(trim(fields[i]));
    if (!header_pos.emplace(name, i).second) {
      throw SchemaError("duplicate header column '" + name + "'");
    }
  }

  std::vector<std::size_t> source_col(spec.size());
  for (std::size_t c = 0; c < spec.size(); ++c) {
    auto it = header_pos.find(spec[c].name);
    if (it == header_pos.end()) {
      throw SchemaError("column '" + spec[c].name + "' missing from header");
    }
    source_col[c] = it->second;
  }
  if (!options.ignore_unlisted_columns && header_pos.size() != spec.size()) {
    for (const auto& entry : header_pos) {
      const std::string& name = entry.first;
      const bool listed = std::any_of(spec.begin(), spec.end(),
                                      [&](const auto& s) { return s.name == name; });
      if (!listed) {
        throw SchemaError("header column '" + name + "' not in column spec");
      }
    }
  }

  RawLoanTable table;
  table.schema.assign(spec.begin(), spec.end());
  std::size_t data_row = 0;
  while (reader.next(fields)) {
    ++data_row;
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, got " +
                           std::to_string(fields.size()),
                       reader.record_index());
    }
    std::vector<Cell> row(spec.size());
    for (std::size_t c = 0; c < spec.size(); ++c) {
      const std::string_view raw = trim(fields[source_col[c]]);
      if (raw.empty()) continue;
      if (spec[c].kind == ColumnKind::numeric) {
        if (auto v = parse_numeric(raw)) row[c] = *v;
      } else {
        row[c] = std::string(raw);
      }
    }
    table.rows.push_back(std::move(row));
    table.source_rows.push_back(data_row);
  }
  return table;
}

RawLoanTable load_csv(std::istream& source, std::span<const ColumnSpec> spec,
                      const LoadOptions& options) {
  const std::string text{std::istreambuf_iterator<char>(source),
                         std::istreambuf_iterator<char>()};
  return load_csv_text(text, spec, options);
}

std::optional<int> terminal_label(std::string_view status) {
  status = trim(status);
  constexpr std::string_view kPolicyPrefix =
      "Does not meet the credit policy. Status:";
  if (status.substr(0, kPolicyPrefix.size()) == kPolicyPrefix) {
    status = trim(status.substr(kPolicyPrefix.size()));
  }
  if (status == kFullyPaid) return 0;
  if (status == kChargedOff) return 1;
  return std::nullopt;
}

RawLoanTable filter_terminal(const RawLoanTable& table) {
  const std::size_t target = table.target_index();
  RawLoanTable out;
  out.schema = table.schema;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto* status = std::get_if<std::string>(&table.rows[r][target]);
    if (status == nullptr) continue;
    const auto label = terminal_label(*status);
    if (!label) continue;
    auto row = table.rows[r];
    row[target] = std::string(*label == 1 ? kChargedOff : kFullyPaid);
    out.rows.push_back(std::move(row));
    out.source_rows.push_back(table.source_rows[r]);
  }
  if (out.rows.empty()) {
    throw DataError("no Fully Paid or Charged Off loans in table");
  }
  return out;
}

RawLoanTable drop_columns(const RawLoanTable& table,
                          std::span<const std::string> names) {
  std::vector<bool> keep(table.schema.size(), true);
  for (const auto& name : names) keep[table.column_index(name)] = false;

  RawLoanTable out;
  bool has_feature = false;
  for (std::size_t c = 0; c < table.schema.size(); ++c) {
    if (!keep[c]) continue;
    out.schema.push_back(table.schema[c]);
    has_feature |= table.schema[c].role == ColumnRole::feature;
  }
  if (!has_feature) throw DataError("no feature columns remain after drop");
  validate_schema(out.schema);

  out.rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    std::vector<Cell> kept;
    kept.reserve(out.schema.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (keep[c]) kept.push_back(row[c]);
    }
    out.rows.push_back(std::move(kept));
  }
  out.source_rows = table.source_rows;
  return out;
}

RawLoanTable drop_role_columns(const RawLoanTable& table) {
  std::vector<std::string> names;
  for (const auto& col : table.schema) {
    if (col.role == ColumnRole::drop) names.push_back(col.name);
  }
  return drop_columns(table, names);
}

MissingPolicy parse_missing_policy(std::string_view text) {
  if (text == "drop_row") return MissingPolicy::drop_row;
  if (text == "fill_median_or_mode") return MissingPolicy::fill_median_or_mode;
  throw SchemaError("unknown missing-value policy '" + std::string(text) + "'");
}

RawLoanTable handle_missing(const RawLoanTable& table, MissingPolicy policy) {
  if (table.rows.empty()) throw DataError("handle_missing: table is empty");

  RawLoanTable out;
  out.schema = table.schema;
  if (policy == MissingPolicy::drop_row) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (std::none_of(row.begin(), row.end(),
                       [](const Cell& c) { return is_missing(c); })) {
        out.rows.push_back(row);
        out.source_rows.push_back(table.source_rows[r]);
      }
    }
    if (out.rows.empty()) {
      throw DataError("every row has a missing cell; nothing left to train on");
    }
    return out;
  }

  const std::size_t width = table.schema.size();
  std::vector<Cell> fill(width);
  for (std::size_t c = 0; c < width; ++c) {
    if (table.schema[c].kind == ColumnKind::numeric) {
      std::vector<double> values;
      for (const auto& row : table.rows) {
        if (const auto* v = std::get_if<double>(&row[c])) values.push_back(*v);
      }
      if (values.size() == table.rows.size()) continue;
      if (values.empty()) {
        throw DataError("column '" + table.schema[c].name +
                        "' has no values to fill from");
      }
      std::sort(values.begin(), values.end());
      const std::size_t mid = values.size() / 2;
      fill[c] = values.size() % 2 == 1 ? values[mid]
                                       : (values[mid - 1] + values[mid]) / 2.0;
    } else {
      std::map<Cell, std::size_t, CellLess> counts;
      std::size_t present = 0;
      for (const auto& row : table.rows) {
        if (!is_missing(row[c])) {
          ++counts[row[c]];
          ++present;
        }
      }
      if (present == table.rows.size()) continue;
      if (counts.empty()) {
        throw DataError("column '" + table.schema[c].name +
                        "' has no values to fill from");
      }
      // std::map iterates in ascending order, so strict > keeps the
      // smallest level among equally frequent ones.
      auto best = counts.begin();
      for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      fill[c] = best->first;
    }
  }

  out.rows = table.rows;
  out.source_rows = table.source_rows;
  for (auto& row : out.rows) {
    for (std::size_t c = 0; c < width; ++c) {
      if (is_missing(row[c])) row[c] = fill[c];
    }
  }
  return out;
}

void DesignMatrix::validate() const {
  if (x.size() != n_rows() * n_cols()) {
    throw DataError("design matrix shape mismatch");
  }
  if (!row_ids.empty() && row_ids.size() != n_rows()) {
    throw DataError("design matrix row id count mismatch");
  }
  for (int label : y) {
    if (label != 0 && label != 1) throw DataError("target must be 0 or 1");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("design matrix has non-finite value");
  }
}

DesignMatrix DesignMatrix::select_rows(std::span<const std::size_t> rows) const {
  DesignMatrix out;
  out.columns = columns;
  out.x.reserve(rows.size() * n_cols());
  out.y.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto src = row(r);
    out.x.insert(out.x.end(), src.begin(), src.end());
    out.y.push_back(y[r]);
    if (!row_ids.empty()) out.row_ids.push_back(row_ids[r]);
  }
  return out;
}

namespace {

std::vector<std::string> make_row_ids(const RawLoanTable& table,
                                      std::string_view id_column) {
  std::vector<std::string> ids;
  ids.reserve(table.rows.size());
  const auto id_col = table.find_column(id_column);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (id_col && !is_missing(table.rows[r][*id_col])) {
      ids.push_back(cell_text(table.rows[r][*id_col]));
    } else {
      ids.push_back(std::to_string(table.source_rows[r]));
    }
  }
  return ids;
}

}  // namespace

Encoded encode(const RawLoanTable& table, std::string_view id_column) {
  if (table.missing_cells() != 0) {
    throw DataError("encode: table still has missing cells");
  }
  const std::size_t target = table.target_index();
  const std::size_t n = table.rows.size();

  // Each output column is produced by one source column; `level` empty
  // means numeric pass-through.
  struct Source {
    std::size_t col;
    std::string level;
  };
  std::vector<Source> sources;
  Encoded result;
  auto& matrix = result.matrix;

  for (std::size_t c = 0; c < table.schema.size(); ++c) {
    const auto& spec = table.schema[c];
    if (spec.role != ColumnRole::feature) continue;
    switch (spec.kind) {
      case ColumnKind::numeric:
        sources.push_back({c, {}});
        matrix.columns.push_back(spec.name);
        break;
      case ColumnKind::categorical: {
        std::set<std::string> levels;
        for (const auto& row : table.rows) levels.insert(cell_text(row[c]));
        if (levels.size() < 2) {
          result.report.dropped_zero_variance.push_back(spec.name);
          break;
        }
        DummyMapping mapping{spec.name, *levels.begin(), {}, {}};
        for (auto it = std::next(levels.begin()); it != levels.end(); ++it) {
          mapping.levels.push_back(*it);
          mapping.outputs.push_back(spec.name + "=" + *it);
          sources.push_back({c, *it});
          matrix.columns.push_back(mapping.outputs.back());
        }
        result.report.dummies.push_back(std::move(mapping));
        break;
      }
      case ColumnKind::text:
      case ColumnKind::date:
        result.report.skipped_non_numeric.push_back(spec.name);
        break;
    }
  }

  matrix.x.reserve(n * sources.size());
  matrix.y.reserve(n);
  for (const auto& row : table.rows) {
    for (const auto& src : sources) {
      if (src.level.empty()) {
        matrix.x.push_back(std::get<double>(row[src.col]));
      } else {
        matrix.x.push_back(cell_text(row[src.col]) == src.level ? 1.0 : 0.0);
      }
    }
    const auto label = terminal_label(cell_text(row[target]));
    if (!label) {
      throw DataError("encode: non-terminal loan status '" +
                      cell_text(row[target]) + "'");
    }
    matrix.y.push_back(*label);
  }
  matrix.row_ids = make_row_ids(table, id_column);
  matrix.validate();
  return result;
}

DesignMatrix encode_for_columns(const RawLoanTable& table,
                                std::span<const std::string> columns,
                                std::string_view id_column) {
  struct Source {
    std::size_t col;
    std::optional<std::string> level;
  };
  std::vector<Source> sources;
  for (const auto& name : columns) {
    if (auto c = table.find_column(name);
        c && table.schema[*c].kind == ColumnKind::numeric) {
      sources.push_back({*c, std::nullopt});
      continue;
    }
    const auto eq = name.find('=');
    std::optional<std::size_t> c;
    if (eq != std::string::npos) c = table.find_column(name.substr(0, eq));
    if (!c || table.schema[*c].kind != ColumnKind::categorical) {
      throw DimensionError("model column '" + name +
                           "' cannot be built from this table");
    }
    sources.push_back({*c, name.substr(eq + 1)});
  }

  const std::size_t target = table.target_index();
  DesignMatrix matrix;
  matrix.columns.assign(columns.begin(), columns.end());
  matrix.x.reserve(table.rows.size() * columns.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (const auto& src : sources) {
      if (is_missing(row[src.col])) {
        throw DataError("encode: missing value in column '" +
                        table.schema[src.col].name + "'");
      }
      if (!src.level) {
        matrix.x.push_back(std::get<double>(row[src.col]));
      } else {
        matrix.x.push_back(cell_text(row[src.col]) == *src.level ? 1.0 : 0.0);
      }
    }
    matrix.y.push_back(terminal_label(cell_text(row[target])).value_or(0));
  }
  matrix.row_ids = make_row_ids(table, id_column);
  matrix.validate();
  return matrix;
}

SplitPair split(const DesignMatrix& matrix, double test_fraction,
                std::uint64_t seed) {
  const std::size_t n = matrix.n_rows();
  if (n < 2) throw DataError("split needs at least 2 rows");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DomainError("test_fraction must lie in (0, 1)");
  }
  auto test_size = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));
  test_size = std::clamp<std::size_t>(test_size, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  SplitPair pair;
  pair.seed = seed;
  pair.test_fraction = test_fraction;
  pair.test_indices.assign(order.begin(), order.begin() + test_size);
  pair.train_indices.assign(order.begin() + test_size, order.end());
  std::sort(pair.test_indices.begin(), pair.test_indices.end());
  std::sort(pair.train_indices.begin(), pair.train_indices.end());
  pair.train = matrix.select_rows(pair.train_indices);
  pair.test = matrix.select_rows(pair.test_indices);
  return pair;
}

ClassBalance class_balance(std::span<const int> y) {
  if (y.empty()) throw DataError("class_balance: empty label vector");
  ClassBalance b;
  for (int label : y) (label == 1 ? b.count1 : b.count0)++;
  const auto total = static_cast<double>(y.size());
  b.w0 = static_cast<double>(b.count0) / total;
  b.w1 = static_cast<double>(b.count1) / total;
  return b;
}

void write_design_csv(std::ostream& out, const DesignMatrix& matrix) {
  std::vector<std::string> fields;
  fields.reserve(matrix.n_cols() + 2);
  fields.push_back("id");
  fields.insert(fields.end(), matrix.columns.begin(), matrix.columns.end());
  fields.push_back("target");
  csv::write_row(out, fields);
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    fields.clear();
    fields.push_back(matrix.row_ids.empty() ? std::to_string(r + 1)
                                            : matrix.row_ids[r]);
    for (double v : matrix.row(r)) fields.push_back(csv::format_double(v));
    fields.push_back(std::to_string(matrix.y[r]));
    csv::write_row(out, fields);
  }
}

}  // namespace creditworks
