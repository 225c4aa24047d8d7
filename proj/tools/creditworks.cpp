// creditworks: command-line driver for the credit-risk pipeline.
//
//   creditworks <explore|prepare|train|evaluate|score|price>
//               --config <path> [--model <path>] [--out <dir>] [--kind <k>]
//
// Exit codes: 0 success, 2 data error, 3 training degeneracy,
// 4 model/data mismatch, 5 missing exposure columns, 64 usage.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "creditworks/errors.hpp"
#include "creditworks/pipeline.hpp"

namespace fs = std::filesystem;
using namespace creditworks;

namespace {

constexpr int kExitData = 2;
constexpr int kExitTraining = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitExposure = 5;
constexpr int kExitUsage = 64;

int run(const std::string& command, const fs::path& config_path,
        const std::optional<fs::path>& model, const std::optional<fs::path>& out,
        const std::optional<std::string>& kind) {
  PipelineConfig config = load_config(config_path);
  if (kind) config.model_kind = parse_model_kind(*kind);
  const fs::path out_dir = out.value_or(config.output_dir);

  Written written;
  if (command == "explore") {
    written = run_explore(config, out_dir);
  } else if (command == "prepare") {
    written = run_prepare(config, out_dir);
  } else if (command == "train") {
    written = run_train(config, out_dir, model);
  } else if (command == "evaluate") {
    written = run_evaluate(config, out_dir, model);
  } else if (command == "score") {
    written = run_score(config, out_dir, model);
  } else if (command == "price") {
    written = run_price(config, out_dir, model);
  } else {
    throw UsageError("unknown command '" + command + "'");
  }
  for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Credit-risk engine: PD models, expected loss and CDS pricing"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> model_path, out_dir, kind;
  const std::pair<const char*, const char*> commands[] = {
      {"explore", "Correlation ranking and threshold counts"},
      {"prepare", "Clean, encode and split; write the design matrices"},
      {"train", "Fit the configured model and write it as JSON"},
      {"evaluate", "Classification reports, ROC curve and AUC comparison"},
      {"score", "Per-loan probability of default"},
      {"price", "EAD, LGD, expected loss and CDS spread per loan"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Pipeline config (JSON)")->required();
    sub->add_option("--model", model_path, "Model file (default <out>/model_<kind>.json)");
    sub->add_option("--out", out_dir, "Output directory (default: config output_dir)");
    sub->add_option("--kind", kind, "Override the config's model kind (logreg|forest)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto as_path = [](const std::optional<std::string>& s) -> std::optional<fs::path> {
    if (!s) return std::nullopt;
    return fs::path(*s);
  };
  try {
    return run(command, config_path, as_path(model_path), as_path(out_dir), kind);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kExitTraining;
  } catch (const DimensionError& e) {
    std::cerr << "model/data mismatch: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const MissingExposureColumns& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitExposure;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitData;
  }
}
