#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "creditworks/dataset.hpp"
#include "creditworks/features.hpp"
#include "creditworks/forest.hpp"
#include "creditworks/logreg.hpp"
#include "creditworks/metrics.hpp"

namespace creditworks {

using nlohmann::json;

// A trained model together with the column list it expects. Logistic
// models also carry the scaler fit on their training half.
struct LogisticArtifact {
  std::vector<std::string> columns;
  LogisticModel model;
  Scaler scaler;
};

struct ForestArtifact {
  std::vector<std::string> columns;
  Forest forest;
};

using ModelArtifact = std::variant<LogisticArtifact, ForestArtifact>;

std::string_view model_kind(const ModelArtifact& model);
const std::vector<std::string>& model_columns(const ModelArtifact& model);
double model_threshold(const ModelArtifact& model);

// PD for every row of m, whose columns must equal model_columns(model).
// Throws DimensionError otherwise.
std::vector<double> predict_pd(const ModelArtifact& model, const DesignMatrix& m);

// {"kind":"logreg","columns":[...],"weights":[...],"bias":b,"threshold":t,
//  "scaler":{"mean":[...],"stddev":[...]}}
// {"kind":"forest","columns":[...],"seed":s,"bootstrap":b,"params":{...},
//  "trees":[<node>...]} where <node> is {"feature","threshold","counts",
//  "left","right"} or a leaf {"counts":[n0,n1],"probability":p}.
json to_json(const ModelArtifact& model);
// Throws Error on malformed documents.
ModelArtifact model_from_json(const json& doc);

json to_json(const ClassificationReport& r);
json to_json(const EncodeReport& r);
json to_json(const ClassBalance& b);
json training_log(const ModelArtifact& model);

}  // namespace creditworks
