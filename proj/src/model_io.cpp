#include "creditworks/model_io.hpp"

#include "creditworks/errors.hpp"

namespace creditworks {
namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

json node_to_json(const std::vector<TreeNode>& nodes, std::size_t i) {
  const auto& n = nodes[i];
  json out;
  out["counts"] = {n.counts.n0, n.counts.n1};
  if (n.is_leaf()) {
    out["probability"] = n.probability;
    return out;
  }
  out["feature"] = n.feature;
  out["threshold"] = n.threshold;
  out["left"] = node_to_json(nodes, n.left);
  out["right"] = node_to_json(nodes, n.right);
  return out;
}

std::uint32_t node_from_json(const json& doc, std::vector<TreeNode>& nodes,
                             std::size_t n_features) {
  const auto index = static_cast<std::uint32_t>(nodes.size());
  nodes.emplace_back();
  TreeNode node;
  const auto& counts = doc.at("counts");
  node.counts = {counts.at(0).get<std::size_t>(), counts.at(1).get<std::size_t>()};
  if (node.counts.total() == 0) throw Error("tree node with no samples");
  node.probability = static_cast<double>(node.counts.n1) /
                     static_cast<double>(node.counts.total());
  if (doc.contains("left")) {
    node.feature = doc.at("feature").get<std::uint32_t>();
    if (node.feature >= n_features) throw Error("tree node feature out of range");
    node.threshold = doc.at("threshold").get<double>();
    node.left = node_from_json(doc.at("left"), nodes, n_features);
    node.right = node_from_json(doc.at("right"), nodes, n_features);
  } else {
    node.probability = doc.at("probability").get<double>();
  }
  nodes[index] = node;
  return index;
}

json params_to_json(const TreeParams& p) {
  json out;
  out["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
  out["min_samples_split"] = p.min_samples_split;
  out["criterion"] = to_string(p.criterion);
  out["feature_subsample"] =
      p.feature_subsample ? json(*p.feature_subsample) : json(nullptr);
  return out;
}

TreeParams params_from_json(const json& doc) {
  TreeParams p;
  if (doc.contains("max_depth") && !doc["max_depth"].is_null()) {
    p.max_depth = doc["max_depth"].get<std::size_t>();
  }
  p.min_samples_split = doc.value("min_samples_split", std::size_t{2});
  p.criterion = parse_criterion(doc.value("criterion", std::string("gini")));
  if (doc.contains("feature_subsample") && !doc["feature_subsample"].is_null()) {
    p.feature_subsample = doc["feature_subsample"].get<std::size_t>();
  }
  return p;
}

json score_json(const Score& s) {
  return {{"value", s.value}, {"degenerate", s.degenerate}};
}

}  // namespace

std::string_view model_kind(const ModelArtifact& model) {
  return std::holds_alternative<LogisticArtifact>(model) ? "logreg" : "forest";
}

const std::vector<std::string>& model_columns(const ModelArtifact& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& {
    return m.columns;
  }, model);
}

double model_threshold(const ModelArtifact& model) {
  if (const auto* lr = std::get_if<LogisticArtifact>(&model)) {
    return lr->model.threshold;
  }
  return 0.5;
}

std::vector<double> predict_pd(const ModelArtifact& model, const DesignMatrix& m) {
  if (m.columns != model_columns(model)) {
    throw DimensionError("data columns do not match the model's columns");
  }
  return std::visit(
      Overloaded{
          [&](const LogisticArtifact& lr) {
            return predict_proba_rows(lr.model, apply_scaler(lr.scaler, m));
          },
          [&](const ForestArtifact& f) { return predict_proba_rows(f.forest, m); }},
      model);
}

json to_json(const ModelArtifact& model) {
  return std::visit(
      Overloaded{
          [](const LogisticArtifact& lr) {
            json out;
            out["kind"] = "logreg";
            out["columns"] = lr.columns;
            out["weights"] = lr.model.weights;
            out["bias"] = lr.model.bias;
            out["threshold"] = lr.model.threshold;
            out["scaler"] = {{"mean", lr.scaler.mean},
                             {"stddev", lr.scaler.stddev}};
            return out;
          },
          [](const ForestArtifact& f) {
            json out;
            out["kind"] = "forest";
            out["columns"] = f.columns;
            out["seed"] = f.forest.seed;
            out["bootstrap"] = f.forest.bootstrap;
            out["params"] = f.forest.trees.empty()
                                ? json::object()
                                : params_to_json(f.forest.trees.front().params());
            json trees = json::array();
            for (const auto& tree : f.forest.trees) {
              trees.push_back(node_to_json(tree.nodes(), 0));
            }
            out["trees"] = std::move(trees);
            return out;
          }},
      model);
}

ModelArtifact model_from_json(const json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    auto columns = doc.at("columns").get<std::vector<std::string>>();
    if (kind == "logreg") {
      LogisticArtifact lr;
      lr.columns = std::move(columns);
      lr.model.weights = doc.at("weights").get<std::vector<double>>();
      lr.model.bias = doc.at("bias").get<double>();
      lr.model.threshold = doc.value("threshold", 0.5);
      lr.scaler.mean = doc.at("scaler").at("mean").get<std::vector<double>>();
      lr.scaler.stddev = doc.at("scaler").at("stddev").get<std::vector<double>>();
      if (lr.model.weights.size() != lr.columns.size() ||
          lr.scaler.size() != lr.columns.size() ||
          lr.scaler.stddev.size() != lr.columns.size()) {
        throw Error("logreg model: weights/scaler/columns lengths differ");
      }
      return lr;
    }
    if (kind == "forest") {
      ForestArtifact f;
      f.columns = std::move(columns);
      f.forest.seed = doc.at("seed").get<std::uint64_t>();
      f.forest.bootstrap = doc.value("bootstrap", true);
      f.forest.n_features = f.columns.size();
      const auto params = params_from_json(doc.value("params", json::object()));
      std::uint64_t stream = 0;
      for (const auto& root : doc.at("trees")) {
        std::vector<TreeNode> nodes;
        node_from_json(root, nodes, f.columns.size());
        f.forest.trees.emplace_back(params, std::move(nodes), f.columns.size(),
                                    stream++);
      }
      if (f.forest.trees.empty()) throw Error("forest model has no trees");
      return f;
    }
    throw Error("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

json to_json(const ClassificationReport& r) {
  json out;
  out["confusion_matrix"] = {{"tp", r.matrix.tp}, {"tn", r.matrix.tn},
                             {"fp", r.matrix.fp}, {"fn", r.matrix.fn}};
  for (int cls : {0, 1}) {
    const auto& c = r.classes[static_cast<std::size_t>(cls)];
    out["classes"][std::to_string(cls)] = {{"precision", score_json(c.precision)},
                                           {"recall", score_json(c.recall)},
                                           {"f1", score_json(c.f1)},
                                           {"support", c.support}};
  }
  out["accuracy"] = r.accuracy;
  out["macro"] = {{"precision", r.macro.precision},
                  {"recall", r.macro.recall},
                  {"f1", r.macro.f1}};
  out["weighted"] = {{"precision", r.weighted.precision},
                     {"recall", r.weighted.recall},
                     {"f1", r.weighted.f1}};
  out["specificity"] = score_json(r.specificity);
  return out;
}

json to_json(const EncodeReport& r) {
  json out;
  out["dropped_zero_variance"] = r.dropped_zero_variance;
  out["skipped_non_numeric"] = r.skipped_non_numeric;
  json dummies = json::array();
  for (const auto& d : r.dummies) {
    dummies.push_back({{"column", d.column},
                       {"baseline", d.baseline},
                       {"levels", d.levels},
                       {"outputs", d.outputs}});
  }
  out["dummies"] = std::move(dummies);
  return out;
}

json to_json(const ClassBalance& b) {
  return {{"count0", b.count0}, {"count1", b.count1}, {"w0", b.w0}, {"w1", b.w1}};
}

json training_log(const ModelArtifact& model) {
  return std::visit(
      Overloaded{
          [](const LogisticArtifact& lr) {
            json history = json::array();
            for (const auto& h : lr.model.history) {
              history.push_back({{"iteration", h.iteration}, {"loss", h.loss}});
            }
            json out;
            out["kind"] = "logreg";
            out["iterations"] =
                lr.model.history.empty() ? 0 : lr.model.history.back().iteration;
            out["final_loss"] =
                lr.model.history.empty() ? 0.0 : lr.model.history.back().loss;
            out["history"] = std::move(history);
            return out;
          },
          [](const ForestArtifact& f) {
            json trees = json::array();
            for (const auto& t : f.forest.trees) {
              trees.push_back({{"stream", t.stream()},
                               {"depth", t.depth()},
                               {"leaves", t.leaf_count()},
                               {"internal_nodes", t.internal_count()}});
            }
            json out;
            out["kind"] = "forest";
            out["n_trees"] = f.forest.n_trees();
            out["trees"] = std::move(trees);
            return out;
          }},
      model);
}

}  // namespace creditworks
