#include "creditworks/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "creditworks/cds.hpp"
#include "creditworks/csv.hpp"
#include "creditworks/errors.hpp"
#include "creditworks/metrics.hpp"

namespace creditworks {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text, Written& written) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
  written.push_back(path);
}

void write_json(const fs::path& path, const json& doc, Written& written) {
  write_text(path, doc.dump(2) + "\n", written);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(json& doc) {
  if (!canonical_mode()) doc["generated_at"] = utc_timestamp();
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

fs::path default_model_path(const PipelineConfig& config, const fs::path& out_dir) {
  return out_dir / ("model_" + std::string(to_string(config.model_kind)) + ".json");
}

RawLoanTable load_table(const PipelineConfig& config, const fs::path& path) {
  const auto spec = load_column_spec(config.column_spec);
  const std::string text = read_file(path);
  LoadOptions options;
  options.ignore_unlisted_columns = config.ignore_unlisted_columns;
  return load_csv_text(text, spec, options);
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key) || doc[key].is_null()) return fallback;
  try {
    return doc[key].get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

ModelKind parse_model_kind(std::string_view text) {
  if (text == "logreg") return ModelKind::logreg;
  if (text == "forest") return ModelKind::forest;
  throw UsageError("unknown model kind '" + std::string(text) +
                   "' (expected logreg or forest)");
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::logreg ? "logreg" : "forest";
}

bool canonical_mode() {
  const char* v = std::getenv("CREDITWORKS_CANONICAL");
  return v != nullptr && std::string_view(v) == "1";
}

std::vector<ColumnSpec> load_column_spec(const fs::path& path) {
  const json doc = read_json(path);
  if (!doc.is_array()) throw SchemaError("column spec must be a JSON array");
  std::vector<ColumnSpec> spec;
  for (const auto& entry : doc) {
    try {
      spec.push_back({entry.at("name").get<std::string>(),
                      parse_column_kind(entry.at("kind").get<std::string>()),
                      parse_column_role(entry.at("role").get<std::string>())});
    } catch (const json::exception& e) {
      throw SchemaError(std::string("bad column spec entry: ") + e.what());
    }
  }
  validate_schema(spec);
  return spec;
}

PipelineConfig parse_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  PipelineConfig c;
  for (const char* key : {"input", "column_spec", "seed"}) {
    if (!doc.contains(key)) {
      throw UsageError(std::string("config is missing required field '") + key + "'");
    }
  }
  c.input = resolve(base_dir, get_or<std::string>(doc, "input", ""));
  c.column_spec = resolve(base_dir, get_or<std::string>(doc, "column_spec", ""));
  if (doc.contains("price_input") && !doc["price_input"].is_null()) {
    c.price_input = resolve(base_dir, get_or<std::string>(doc, "price_input", ""));
  }
  c.ignore_unlisted_columns = get_or(doc, "ignore_unlisted_columns", false);
  try {
    c.missing_policy = parse_missing_policy(
        get_or<std::string>(doc, "missing_policy", "fill_median_or_mode"));
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  c.test_fraction = get_or(doc, "test_fraction", 0.2);
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) {
    throw UsageError("test_fraction must lie in (0, 1)");
  }
  c.seed = get_or<std::uint64_t>(doc, "seed", 0);
  c.risk_free_rate = get_or(doc, "risk_free_rate", 0.02);
  c.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "out"));

  const json model = get_or(doc, "model", json::object());
  c.model_kind = parse_model_kind(get_or<std::string>(model, "kind", "logreg"));

  const json lr = get_or(model, "logreg", json::object());
  c.logreg.learning_rate = get_or(lr, "learning_rate", c.logreg.learning_rate);
  c.logreg.max_iters = get_or(lr, "max_iters", c.logreg.max_iters);
  c.logreg.tol = get_or(lr, "tol", c.logreg.tol);
  c.logreg.l2 = get_or(lr, "l2", c.logreg.l2);
  c.logreg.threshold = get_or(lr, "threshold", c.logreg.threshold);
  c.logreg.seed = c.seed;
  if (!(c.logreg.threshold > 0.0 && c.logreg.threshold < 1.0)) {
    throw UsageError("logreg.threshold must lie in (0, 1)");
  }

  const json rf = get_or(model, "forest", json::object());
  c.forest.n_trees = get_or(rf, "n_trees", c.forest.n_trees);
  if (c.forest.n_trees == 0) throw UsageError("forest.n_trees must be at least 1");
  if (rf.contains("max_depth") && !rf["max_depth"].is_null()) {
    c.forest.params.max_depth = get_or<std::size_t>(rf, "max_depth", 0);
  }
  c.forest.params.min_samples_split =
      get_or(rf, "min_samples_split", c.forest.params.min_samples_split);
  try {
    c.forest.params.criterion =
        parse_criterion(get_or<std::string>(rf, "criterion", "gini"));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (rf.contains("feature_subsample") && !rf["feature_subsample"].is_null()) {
    c.forest.params.feature_subsample = get_or<std::size_t>(rf, "feature_subsample", 1);
  }
  c.forest.bootstrap = get_or(rf, "bootstrap", true);
  c.forest.threads = get_or<std::size_t>(rf, "threads", 0);
  c.forest.seed = c.seed;

  const json ex = get_or(doc, "exposure_columns", json::object());
  auto& e = c.exposure;
  e.id = get_or(ex, "id", e.id);
  e.funded_amount = get_or(ex, "funded_amount", e.funded_amount);
  e.received_principal = get_or(ex, "received_principal", e.received_principal);
  e.rate = get_or(ex, "rate", e.rate);
  e.rate_in_percent = get_or(ex, "rate_in_percent", e.rate_in_percent);
  e.term_months = get_or(ex, "term_months", e.term_months);
  e.recoveries = get_or(ex, "recoveries", e.recoveries);
  e.purpose = get_or(ex, "purpose", e.purpose);
  if (ex.contains("remaining_months") && !ex["remaining_months"].is_null()) {
    e.remaining_months = get_or<std::string>(ex, "remaining_months", "");
  }

  const json explore = get_or(doc, "explore", json::object());
  if (explore.contains("thresholds")) {
    c.explore.thresholds.clear();
    for (const auto& t : explore["thresholds"]) {
      c.explore.thresholds.push_back(
          {get_or<std::string>(t, "column", ""), get_or(t, "greater_than", 0.0)});
    }
  }
  if (explore.contains("group_by")) {
    c.explore.group_by = get_or<std::vector<std::string>>(explore, "group_by", {});
  }

  for (const auto* p : {&c.input, &c.column_spec}) {
    if (!fs::exists(*p)) throw UsageError("path not found: " + p->string());
  }
  if (c.price_input && !fs::exists(*c.price_input)) {
    throw UsageError("path not found: " + c.price_input->string());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config not found: " + path.string());
  const json doc = read_json(path);
  return parse_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

PreparedData prepare_data(const PipelineConfig& config) {
  PreparedData data;
  auto table = filter_terminal(load_table(config, config.input));
  table = drop_role_columns(table);
  data.table = handle_missing(table, config.missing_policy);
  data.encoded = encode(data.table, config.exposure.id);
  data.split = split(data.encoded.matrix, config.test_fraction, config.seed);
  return data;
}

ModelArtifact train_model(const PipelineConfig& config, const DesignMatrix& train) {
  const auto balance = class_balance(train.y);
  if (balance.count0 == 0 || balance.count1 == 0) {
    throw TrainingError("training half contains a single class");
  }
  if (config.model_kind == ModelKind::logreg) {
    LogisticArtifact lr;
    lr.columns = train.columns;
    lr.scaler = fit_scaler(train);
    lr.model = fit_logistic(apply_scaler(lr.scaler, train), config.logreg);
    return lr;
  }
  ForestArtifact f;
  f.columns = train.columns;
  f.forest = fit_forest(train, config.forest);
  return f;
}

ModelArtifact load_model(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return model_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw DataError("model file '" + path.string() + "' is not valid JSON");
  }
}

Written run_explore(const PipelineConfig& config, const fs::path& out_dir) {
  Written written;
  const auto loaded = load_table(config, config.input);
  const auto terminal = filter_terminal(loaded);

  json summary;
  summary["rows_loaded"] = loaded.row_count();
  summary["terminal_rows"] = terminal.row_count();
  json thresholds = json::array();
  for (const auto& rule : config.explore.thresholds) {
    json entry = {{"column", rule.column}, {"greater_than", rule.greater_than}};
    const auto col = terminal.find_column(rule.column);
    if (!col || terminal.schema[*col].kind != ColumnKind::numeric) {
      entry["available"] = false;
    } else {
      const auto count = count_above(terminal, rule);
      entry["available"] = true;
      entry["count"] = count.count;
      entry["evaluated"] = count.evaluated;
    }
    thresholds.push_back(std::move(entry));
  }
  summary["thresholds"] = std::move(thresholds);
  json groups = json::object();
  for (const auto& column : config.explore.group_by) {
    const auto col = terminal.find_column(column);
    if (!col || terminal.schema[*col].kind == ColumnKind::numeric) continue;
    json levels = json::array();
    for (const auto& g : default_rate_by(terminal, column)) {
      levels.push_back({{"level", g.level},
                        {"loans", g.loans},
                        {"defaults", g.defaults},
                        {"default_rate", g.rate}});
    }
    groups[column] = std::move(levels);
  }
  summary["default_rate_by"] = std::move(groups);

  const auto cleaned = handle_missing(drop_role_columns(terminal), config.missing_policy);
  const auto encoded = encode(cleaned, config.exposure.id);
  summary["class_balance"] = to_json(class_balance(encoded.matrix.y));
  stamp(summary);

  std::ostringstream corr;
  write_correlation_csv(corr, correlation_report(encoded.matrix));
  write_text(out_dir / "correlation.csv", corr.str(), written);
  write_json(out_dir / "explore_summary.json", summary, written);
  return written;
}

Written run_prepare(const PipelineConfig& config, const fs::path& out_dir) {
  Written written;
  const auto data = prepare_data(config);
  std::ostringstream train, test;
  write_design_csv(train, data.split.train);
  write_design_csv(test, data.split.test);
  write_text(out_dir / "train.csv", train.str(), written);
  write_text(out_dir / "test.csv", test.str(), written);
  write_json(out_dir / "encode_report.json", to_json(data.encoded.report), written);

  json summary;
  summary["seed"] = data.split.seed;
  summary["test_fraction"] = data.split.test_fraction;
  summary["rows"] = data.encoded.matrix.n_rows();
  summary["columns"] = data.encoded.matrix.columns;
  summary["train_rows"] = data.split.train.n_rows();
  summary["test_rows"] = data.split.test.n_rows();
  summary["class_balance"] = to_json(class_balance(data.encoded.matrix.y));
  stamp(summary);
  write_json(out_dir / "prepare_summary.json", summary, written);
  return written;
}

Written run_train(const PipelineConfig& config, const fs::path& out_dir,
                  const std::optional<fs::path>& model_path) {
  Written written;
  const auto data = prepare_data(config);
  const auto model = train_model(config, data.split.train);
  const fs::path path = model_path.value_or(default_model_path(config, out_dir));
  write_json(path, to_json(model), written);

  json log = training_log(model);
  log["train_rows"] = data.split.train.n_rows();
  log["seed"] = config.seed;
  stamp(log);
  write_json(out_dir / ("training_log_" + std::string(to_string(config.model_kind)) + ".json"),
             log, written);
  return written;
}

Written run_evaluate(const PipelineConfig& config, const fs::path& out_dir,
                     const std::optional<fs::path>& model_path) {
  Written written;
  const auto model = load_model(model_path.value_or(default_model_path(config, out_dir)));
  const auto data = prepare_data(config);
  const std::string kind(model_kind(model));
  const double threshold = model_threshold(model);

  RocCurve test_roc;
  for (const auto* half : {&data.split.train, &data.split.test}) {
    const bool is_test = half == &data.split.test;
    const auto pd = predict_pd(model, *half);
    std::vector<int> predicted(pd.size());
    for (std::size_t i = 0; i < pd.size(); ++i) predicted[i] = classify(pd[i], threshold);
    const auto rep = report(half->y, predicted);

    const std::string stem = "report_" + kind + (is_test ? "_test" : "_train");
    std::string title = (is_test ? "Test" : "Train") + std::string(" result (") + kind +
                        ")\n\n";
    write_text(out_dir / (stem + ".txt"), title + render_report(rep), written);
    json doc = to_json(rep);
    doc["model"] = kind;
    doc["split"] = is_test ? "test" : "train";
    doc["threshold"] = threshold;
    if (is_test) {
      test_roc = roc(half->y, pd);
      doc["auc"] = test_roc.auc;
    }
    stamp(doc);
    write_json(out_dir / (stem + ".json"), doc, written);
  }

  std::ostringstream roc_csv;
  write_roc_csv(roc_csv, test_roc);
  write_text(out_dir / ("roc_" + kind + ".csv"), roc_csv.str(), written);

  const fs::path comparison_path = out_dir / "comparison.json";
  json comparison = json::object();
  if (fs::exists(comparison_path)) {
    try {
      comparison = json::parse(read_file(comparison_path));
    } catch (const json::parse_error&) {
      comparison = json::object();
    }
    if (!comparison.is_object()) comparison = json::object();
  }
  comparison[kind] = test_roc.auc;
  write_json(comparison_path, comparison, written);
  return written;
}

Written run_score(const PipelineConfig& config, const fs::path& out_dir,
                  const std::optional<fs::path>& model_path) {
  Written written;
  const auto model = load_model(model_path.value_or(default_model_path(config, out_dir)));
  const auto data = prepare_data(config);
  const auto& matrix = data.encoded.matrix;
  const auto pd = predict_pd(model, matrix);
  const double threshold = model_threshold(model);

  std::vector<const char*> half(matrix.n_rows(), "train");
  for (std::size_t i : data.split.test_indices) half[i] = "test";
  std::ostringstream out;
  out << "id,split,pd,predicted\n";
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    csv::write_row(out, {matrix.row_ids[r], half[r], csv::format_double(pd[r]),
                         std::to_string(classify(pd[r], threshold))});
  }
  write_text(out_dir / ("scores_" + std::string(model_kind(model)) + ".csv"), out.str(),
             written);
  return written;
}

Written run_price(const PipelineConfig& config, const fs::path& out_dir,
                  const std::optional<fs::path>& model_path) {
  Written written;
  const auto& cols = config.exposure;

  auto book = load_table(config, config.price_input.value_or(config.input));
  require_exposure_columns(book, cols, false);
  auto history = load_table(config, config.input);
  require_exposure_columns(history, cols, true);

  const auto model = load_model(model_path.value_or(default_model_path(config, out_dir)));
  const auto recovery = recovery_rates(
      handle_missing(drop_role_columns(filter_terminal(history)), config.missing_policy),
      cols);

  book = handle_missing(drop_role_columns(book), config.missing_policy);
  require_exposure_columns(book, cols, false);
  const auto matrix = encode_for_columns(book, model_columns(model), cols.id);
  const auto pd = predict_pd(model, matrix);
  const std::size_t purpose_col = book.column_index(cols.purpose);

  std::ostringstream out;
  out << "id,pd,ead,recovery_rate,lgd,el,spread_bps\n";
  std::size_t priced = 0, matured = 0;
  for (std::size_t r = 0; r < book.row_count(); ++r) {
    const auto exposure = ead(loan_exposure(book, r, cols));
    if (!(exposure.remaining_months > 0.0)) {
      ++matured;
      continue;
    }
    std::string purpose;
    if (const auto* p = std::get_if<std::string>(&book.rows[r][purpose_col])) purpose = *p;
    const auto quote = quote_exposure(pd[r], exposure.ead, recovery.rate_for(purpose));
    const auto cds = price_for_loan(pd[r], quote,
                                    {exposure.remaining_months / 12.0, 0.0},
                                    config.risk_free_rate);
    csv::write_row(out, {matrix.row_ids[r], csv::format_double(quote.pd),
                         csv::format_double(quote.ead),
                         csv::format_double(quote.recovery_rate),
                         csv::format_double(quote.lgd_amount), csv::format_double(quote.el),
                         csv::format_double(cds.spread_bps)});
    ++priced;
  }
  write_text(out_dir / "pricing.csv", out.str(), written);

  json summary;
  summary["model"] = model_kind(model);
  summary["risk_free_rate"] = config.risk_free_rate;
  summary["priced"] = priced;
  summary["skipped_no_remaining_term"] = matured;
  summary["recovery_rates"] = {{"overall", recovery.overall_rate},
                               {"by_purpose", recovery.entries}};
  stamp(summary);
  write_json(out_dir / "pricing_summary.json", summary, written);
  return written;
}

}  // namespace creditworks
