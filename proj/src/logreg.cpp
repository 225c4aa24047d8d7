#include "creditworks/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "creditworks/errors.hpp"
#include "creditworks/kernels.hpp"

namespace creditworks {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int classify(double p, double threshold) { return p >= threshold ? 1 : 0; }

namespace {

std::size_t check_shape(const LogisticModel& model, std::span<const double> x,
                        std::span<const int> y) {
  const std::size_t cols = model.weights.size();
  if (y.empty()) throw DimensionError("empty label vector");
  if (x.size() != y.size() * cols) {
    throw DimensionError("feature matrix does not match labels/weights");
  }
  return cols;
}

double mean_log_loss(std::span<const double> p, std::span<const int> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kLossEpsilon, 1.0 - kLossEpsilon);
    total -= y[i] == 1 ? std::log(q) : std::log(1.0 - q);
  }
  return total / static_cast<double>(p.size());
}

double l2_penalty(const LogisticModel& model, double l2) {
  if (l2 == 0.0) return 0.0;
  return 0.5 * l2 * kernels::dot(model.weights, model.weights);
}

Gradient gradient_from_probs(const LogisticModel& model,
                             std::span<const double> x,
                             std::span<const double> p,
                             std::span<const int> y, double l2,
                             std::vector<double>& residual) {
  const std::size_t n = y.size();
  residual.resize(n);
  double bias_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residual[i] = p[i] - static_cast<double>(y[i]);
    bias_sum += residual[i];
  }
  Gradient g;
  g.weights.assign(model.weights.size(), 0.0);
  kernels::accumulate_transposed(x, model.weights.size(), residual, g.weights);
  const auto nd = static_cast<double>(n);
  for (std::size_t c = 0; c < g.weights.size(); ++c) {
    g.weights[c] = g.weights[c] / nd + l2 * model.weights[c];
  }
  g.bias = bias_sum / nd;
  return g;
}

}  // namespace

double predict_proba(const LogisticModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    throw DimensionError("feature vector has " + std::to_string(x.size()) +
                         " values, model expects " +
                         std::to_string(model.weights.size()));
  }
  return sigmoid(kernels::dot(model.weights, x) + model.bias);
}

std::vector<double> predict_proba_rows(const LogisticModel& model,
                                       const DesignMatrix& m) {
  if (m.n_cols() != model.weights.size()) {
    throw DimensionError("matrix has " + std::to_string(m.n_cols()) +
                         " columns, model expects " +
                         std::to_string(model.weights.size()));
  }
  std::vector<double> out(m.n_rows());
  kernels::affine_rows(m.x, m.n_cols(), model.weights, model.bias, out);
  for (auto& v : out) v = sigmoid(v);
  return out;
}

double bce_loss(const LogisticModel& model, std::span<const double> x,
                std::span<const int> y, double l2) {
  const std::size_t cols = check_shape(model, x, y);
  std::vector<double> z(y.size());
  kernels::affine_rows(x, cols, model.weights, model.bias, z);
  for (auto& v : z) v = sigmoid(v);
  return mean_log_loss(z, y) + l2_penalty(model, l2);
}

Gradient gradient(const LogisticModel& model, std::span<const double> x,
                  std::span<const int> y, double l2) {
  const std::size_t cols = check_shape(model, x, y);
  std::vector<double> p(y.size());
  kernels::affine_rows(x, cols, model.weights, model.bias, p);
  for (auto& v : p) v = sigmoid(v);
  std::vector<double> residual;
  return gradient_from_probs(model, x, p, y, l2, residual);
}

LogisticModel fit_logistic(const DesignMatrix& train,
                           const LogisticConfig& config) {
  const std::size_t n = train.n_rows();
  const std::size_t cols = train.n_cols();
  if (n == 0) throw TrainingError("cannot fit logistic regression on no rows");
  const auto positives = std::count(train.y.begin(), train.y.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == n) {
    throw TrainingError("training labels contain a single class");
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw DomainError("threshold must lie in (0, 1)");
  }

  // Canonical row order: lexicographic on (features, label).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = train.row(a), rb = train.row(b);
    const auto cmp = std::lexicographical_compare_three_way(
        ra.begin(), ra.end(), rb.begin(), rb.end());
    if (cmp != 0) return cmp < 0;
    return train.y[a] < train.y[b];
  });
  std::vector<double> x;
  std::vector<int> y;
  x.reserve(n * cols);
  y.reserve(n);
  for (std::size_t r : order) {
    const auto src = train.row(r);
    x.insert(x.end(), src.begin(), src.end());
    y.push_back(train.y[r]);
  }

  LogisticModel model;
  model.weights.assign(cols, 0.0);
  model.threshold = config.threshold;

  std::vector<double> p(n);
  std::vector<double> residual;
  auto forward = [&] {
    kernels::affine_rows(x, cols, model.weights, model.bias, p);
    for (auto& v : p) v = sigmoid(v);
    return mean_log_loss(p, y) + l2_penalty(model, config.l2);
  };

  double loss = forward();
  model.history.push_back({0, loss});
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    const Gradient g = gradient_from_probs(model, x, p, y, config.l2, residual);
    for (std::size_t c = 0; c < cols; ++c) {
      model.weights[c] -= config.learning_rate * g.weights[c];
    }
    model.bias -= config.learning_rate * g.bias;
    const double next = forward();
    model.history.push_back({iter, next});
    const bool converged = std::abs(next - loss) < config.tol;
    loss = next;
    if (converged) break;
  }
  return model;
}

}  // namespace creditworks
