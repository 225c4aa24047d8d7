#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"

#include "creditworks/errors.hpp"
#include "creditworks/features.hpp"
#include "creditworks/logreg.hpp"
#include "creditworks/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace creditworks;

namespace {

double accuracy(const LogisticModel& model, const DesignMatrix& m) {
  const auto p = predict_proba_rows(model, m);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    hits += classify(p[i], model.threshold) == m.y[i];
  }
  return static_cast<double>(hits) / static_cast<double>(p.size());
}

}  // namespace

TEST_CASE("sigmoid values and saturation") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(std::isfinite(sigmoid(-800.0)));
  CHECK(sigmoid(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-15));
  CHECK(sigmoid(-2.0) == doctest::Approx(1 - 0.8807970779778823).epsilon(1e-15));
}

TEST_CASE("classify is boundary inclusive") {
  CHECK(classify(0.5, 0.5) == 1);
  CHECK(classify(0.49) == 0);
  CHECK(classify(0.97) == 1);
  CHECK(classify(0.3, 0.25) == 1);
}

TEST_CASE("predict_proba examples") {
  LogisticModel zero{{0.0, 0.0}, 0.0, 0.5, {}};
  CHECK(predict_proba(zero, std::vector<double>{3, -9}) == 0.5);
  LogisticModel one{{1.0}, 0.0, 0.5, {}};
  CHECK(predict_proba(one, std::vector<double>{0}) == 0.5);
  LogisticModel m{{2.0, -1.0}, 0.5, 0.5, {}};
  CHECK(predict_proba(m, std::vector<double>{1, 1}) ==
        doctest::Approx(0.8175744761936437).epsilon(1e-15));
  CHECK_THROWS_AS(predict_proba(m, std::vector<double>{1}), DimensionError);
}

TEST_CASE("bce_loss examples") {
  const std::vector<double> x = {1, -1, 2};
  const std::vector<int> y = {1, 0, 1};
  LogisticModel zero{{0.0}, 0.0, 0.5, {}};
  CHECK(bce_loss(zero, x, y) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  LogisticModel confident{{800.0}, 0.0, 0.5, {}};
  CHECK(bce_loss(confident, x, y) <= -std::log1p(-kLossEpsilon) * 1.0001);

  LogisticModel w{{0.7}, -0.2, 0.5, {}};
  const std::vector<long double> wl = {0.7L};
  const auto ref = oracles::log_loss(wl, -0.2L, x, y);
  CHECK(std::abs(bce_loss(w, x, y) - static_cast<double>(ref)) < 1e-15);
}

TEST_CASE("gradient examples") {
  LogisticModel zero{{0.0}, 0.0, 0.5, {}};
  const auto g = gradient(zero, std::vector<double>{1}, std::vector<int>{1});
  CHECK(g.weights == std::vector<double>{-0.5});
  CHECK(g.bias == -0.5);

  // Saturated correct predictions give a zero gradient.
  LogisticModel sure{{800.0}, 0.0, 0.5, {}};
  const auto g0 = gradient(sure, std::vector<double>{1, -1}, std::vector<int>{1, 0});
  CHECK(g0.weights[0] == 0.0);
  CHECK(g0.bias == 0.0);
}

TEST_CASE("gradient agrees with central finite differences") {
  Rng rng(5);
  const std::size_t rows = 5, cols = 3;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(rows * cols);
    for (auto& v : x) v = rng.normal();
    std::vector<int> y(rows);
    for (auto& v : y) v = static_cast<int>(rng.below(2));
    LogisticModel m;
    m.weights.resize(cols);
    for (auto& w : m.weights) w = rng.normal() * 0.5;
    m.bias = rng.normal() * 0.5;
    const auto g = gradient(m, x, y);
    const auto fd = oracles::finite_difference_gradient(m.weights, m.bias, x, y);
    for (std::size_t c = 0; c <= cols; ++c) {
      const long double a = c < cols ? g.weights[c] : g.bias;
      const long double denom = std::max({std::fabs(a), std::fabs(fd[c]), 1e-8L});
      CHECK(std::fabs(a - fd[c]) / denom < 1e-5L);
    }
  }
}

TEST_CASE("fit examples") {
  DesignMatrix sep;
  sep.columns = {"x"};
  sep.x = {-1, 1, -1, 1};
  sep.y = {0, 1, 0, 1};
  const auto model = fit_logistic(sep);
  CHECK(accuracy(model, sep) == 1.0);
  CHECK(model.history.front().iteration == 0);
  CHECK(model.history.front().loss == doctest::Approx(std::log(2.0)));

  LogisticConfig none;
  none.max_iters = 0;
  const auto zero = fit_logistic(sep, none);
  CHECK(zero.weights == std::vector<double>{0.0});
  CHECK(zero.bias == 0.0);
  CHECK(predict_proba(zero, std::vector<double>{5}) == 0.5);

  DesignMatrix single = sep;
  single.y = {1, 1, 1, 1};
  CHECK_THROWS_AS(fit_logistic(single), TrainingError);
  DesignMatrix empty;
  empty.columns = {"x"};
  CHECK_THROWS_AS(fit_logistic(empty), TrainingError);
}

TEST_CASE("fit on Gaussian blobs reaches 0.99 test accuracy") {
  const auto data = fixtures::gaussian_blobs(2000, 4.0, 3);
  const auto parts = split(data, 0.2, 3);
  LogisticConfig config;
  config.learning_rate = 0.1;
  config.max_iters = 500;
  const auto model = fit_logistic(parts.train, config);
  CHECK(accuracy(model, parts.test) >= 0.99);
}

TEST_CASE("loss history is non-increasing at a small learning rate") {
  const auto raw = fixtures::gaussian_blobs(300, 2.0, 8);
  const auto m = apply_scaler(fit_scaler(raw), raw);
  LogisticConfig config;
  config.learning_rate = 0.01;
  config.max_iters = 400;
  config.tol = 0.0;
  const auto model = fit_logistic(m, config);
  CHECK(model.history.size() == 401);
  for (std::size_t i = 1; i < model.history.size(); ++i) {
    CHECK(model.history[i].loss <= model.history[i - 1].loss);
  }
}

TEST_CASE("permuting training rows leaves the model bit-identical") {
  const auto m = fixtures::random_matrix(80, 4, 12);
  std::vector<std::size_t> order(m.n_rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(13);
  rng.shuffle(std::span<std::size_t>(order));
  const auto permuted = m.select_rows(order);
  LogisticConfig config;
  config.max_iters = 200;
  const auto a = fit_logistic(m, config);
  const auto b = fit_logistic(permuted, config);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.history.back().loss == b.history.back().loss);
}

TEST_CASE("the decision boundary is the line w.x + b = logit(threshold)") {
  const auto m = fixtures::gaussian_blobs(400, 3.0, 17);
  const auto model = fit_logistic(m);
  const double w0 = model.weights[0], w1 = model.weights[1], b = model.bias;
  REQUIRE(std::abs(w1) > 1e-6);
  // Points on the boundary line, then shifted along the normal.
  for (double t : {-2.0, 0.5, 3.0}) {
    const double x0 = t;
    const double x1 = -(b + w0 * t) / w1;
    const double norm = std::hypot(w0, w1);
    const std::vector<double> above = {x0 + 0.01 * w0 / norm, x1 + 0.01 * w1 / norm};
    const std::vector<double> below = {x0 - 0.01 * w0 / norm, x1 - 0.01 * w1 / norm};
    CHECK(predict_proba(model, std::vector<double>{x0, x1}) ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(classify(predict_proba(model, above)) == 1);
    CHECK(classify(predict_proba(model, below)) == 0);
  }
}
