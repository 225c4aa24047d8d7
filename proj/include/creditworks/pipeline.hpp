#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "creditworks/dataset.hpp"
#include "creditworks/exposure.hpp"
#include "creditworks/features.hpp"
#include "creditworks/forest.hpp"
#include "creditworks/logreg.hpp"
#include "creditworks/model_io.hpp"

namespace creditworks {

enum class ModelKind { logreg, forest };

ModelKind parse_model_kind(std::string_view text);  // throws UsageError
std::string_view to_string(ModelKind kind);

struct ExploreSettings {
  std::vector<ThresholdRule> thresholds = {
      {"annual_inc", 1'000'000.0}, {"open_acc", 40.0}, {"total_acc", 80.0}};
  std::vector<std::string> group_by = {"sub_grade"};
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path column_spec;
  std::optional<std::filesystem::path> price_input;
  bool ignore_unlisted_columns = false;
  MissingPolicy missing_policy = MissingPolicy::fill_median_or_mode;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  ModelKind model_kind = ModelKind::logreg;
  LogisticConfig logreg;
  ForestConfig forest;
  double risk_free_rate = 0.02;
  std::filesystem::path output_dir = "out";
  ExposureColumns exposure;
  ExploreSettings explore;
};

// Parses a JSON config. Relative paths resolve against the config file's
// directory; input files must exist. Throws UsageError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const json& doc, const std::filesystem::path& base_dir);

// JSON array of {name, kind, role}.
std::vector<ColumnSpec> load_column_spec(const std::filesystem::path& path);

struct PreparedData {
  RawLoanTable table;  // terminal rows, drop columns removed, no missing cells
  Encoded encoded;
  SplitPair split;
};

PreparedData prepare_data(const PipelineConfig& config);

// True when CREDITWORKS_CANONICAL=1: outputs carry no timestamps.
bool canonical_mode();

// Each command writes into `out_dir` and returns the files it wrote.
// `model_path` defaults to <out_dir>/model_<kind>.json.
using Written = std::vector<std::filesystem::path>;

Written run_explore(const PipelineConfig& config, const std::filesystem::path& out_dir);
Written run_prepare(const PipelineConfig& config, const std::filesystem::path& out_dir);
Written run_train(const PipelineConfig& config, const std::filesystem::path& out_dir,
                  const std::optional<std::filesystem::path>& model_path);
Written run_evaluate(const PipelineConfig& config, const std::filesystem::path& out_dir,
                     const std::optional<std::filesystem::path>& model_path);
Written run_score(const PipelineConfig& config, const std::filesystem::path& out_dir,
                  const std::optional<std::filesystem::path>& model_path);
Written run_price(const PipelineConfig& config, const std::filesystem::path& out_dir,
                  const std::optional<std::filesystem::path>& model_path);

ModelArtifact train_model(const PipelineConfig& config, const DesignMatrix& train);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace creditworks
