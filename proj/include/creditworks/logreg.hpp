#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "creditworks/dataset.hpp"

namespace creditworks {

// Branches on sign so neither exp() call can overflow.
double sigmoid(double z);

// 1 iff p >= threshold.
int classify(double p, double threshold = 0.5);

struct LossPoint {
  std::size_t iteration = 0;
  double loss = 0.0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double threshold = 0.5;
  std::vector<LossPoint> history;
};

// Probability clip inside the log-loss.
inline constexpr double kLossEpsilon = 1e-12;

double predict_proba(const LogisticModel& model, std::span<const double> x);

std::vector<double> predict_proba_rows(const LogisticModel& model,
                                       const DesignMatrix& m);

// Mean binary cross-entropy plus (l2 / 2) * |w|^2.
double bce_loss(const LogisticModel& model, std::span<const double> x,
                std::span<const int> y, double l2 = 0.0);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// grad_w = X^T (p - y) / n + l2 * w, grad_b = mean(p - y).
Gradient gradient(const LogisticModel& model, std::span<const double> x,
                  std::span<const int> y, double l2 = 0.0);

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t max_iters = 1000;
  double tol = 1e-9;
  // Full-batch descent from zero weights never draws random numbers; the
  // seed is kept so every model config carries one.
  std::uint64_t seed = 0;
  double l2 = 0.0;
  double threshold = 0.5;
};

// Full-batch gradient descent from zero weights. Stops when the loss
// changes by less than tol between iterations or after max_iters updates.
// history[0] is the initial loss, history[t] the loss after update t.
//
// Rows are put into a canonical order before descent, so any permutation
// of the training rows yields a bit-identical model.
//
// Throws TrainingError when X is empty or y holds a single class.
LogisticModel fit_logistic(const DesignMatrix& train,
                           const LogisticConfig& config = {});

}  // namespace creditworks
