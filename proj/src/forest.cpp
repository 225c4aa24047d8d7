#include "creditworks/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "creditworks/errors.hpp"

namespace creditworks {

std::string_view to_string(Criterion c) {
  return c == Criterion::gini ? "gini" : "entropy";
}

Criterion parse_criterion(std::string_view text) {
  if (text == "gini") return Criterion::gini;
  if (text == "entropy") return Criterion::entropy;
  throw DomainError("unknown split criterion '" + std::string(text) + "'");
}

double gini(std::size_t n0, std::size_t n1) {
  const auto n = static_cast<double>(n0 + n1);
  if (n == 0.0) throw DomainError("gini of an empty node");
  const double p0 = static_cast<double>(n0) / n;
  const double p1 = static_cast<double>(n1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

double entropy(std::size_t n0, std::size_t n1) {
  const auto n = static_cast<double>(n0 + n1);
  if (n == 0.0) throw DomainError("entropy of an empty node");
  double h = 0.0;
  for (std::size_t k : {n0, n1}) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double impurity(ClassCounts counts, Criterion criterion) {
  return criterion == Criterion::gini ? gini(counts.n0, counts.n1)
                                      : entropy(counts.n0, counts.n1);
}

double information_gain(ClassCounts parent, ClassCounts left,
                        ClassCounts right, Criterion criterion) {
  if (left.n0 + right.n0 != parent.n0 || left.n1 + right.n1 != parent.n1) {
    throw DomainError("children do not partition the parent node");
  }
  if (parent.total() == 0) throw DomainError("information gain of empty node");
  const auto n = static_cast<double>(parent.total());
  double children = 0.0;
  if (left.total() != 0) {
    children += static_cast<double>(left.total()) / n * impurity(left, criterion);
  }
  if (right.total() != 0) {
    children +=
        static_cast<double>(right.total()) / n * impurity(right, criterion);
  }
  return impurity(parent, criterion) - children;
}

namespace {

ClassCounts count_rows(const DesignMatrix& m, std::span<const std::size_t> rows) {
  ClassCounts c;
  for (std::size_t r : rows) (m.y[r] == 1 ? c.n1 : c.n0)++;
  return c;
}

// Threshold strictly between a < b that sends a left and b right.
double midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

// Gains this close are equal up to rounding, so the index tie-break decides.
constexpr double kGainTieTolerance = 1e-12;

bool better(const Split& cand, const std::optional<Split>& best) {
  if (!best) return true;
  if (cand.gain > best->gain + kGainTieTolerance) return true;
  if (cand.gain < best->gain - kGainTieTolerance) return false;
  if (cand.feature != best->feature) return cand.feature < best->feature;
  return cand.threshold < best->threshold;
}

// Best split on one feature regardless of gain sign; nullopt when the
// feature is constant over `rows`.
std::optional<Split> scan_feature(const DesignMatrix& m,
                                  std::span<const std::size_t> rows,
                                  std::size_t feature, ClassCounts parent,
                                  Criterion criterion,
                                  std::vector<std::pair<double, int>>& scratch) {
  const std::size_t cols = m.n_cols();
  scratch.clear();
  for (std::size_t r : rows) scratch.emplace_back(m.x[r * cols + feature], m.y[r]);
  std::sort(scratch.begin(), scratch.end());

  std::optional<Split> best;
  ClassCounts left;
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    (scratch[i].second == 1 ? left.n1 : left.n0)++;
    if (scratch[i].first == scratch[i + 1].first) continue;
    const ClassCounts right{parent.n0 - left.n0, parent.n1 - left.n1};
    const Split cand{feature, midpoint(scratch[i].first, scratch[i + 1].first),
                     information_gain(parent, left, right, criterion)};
    if (better(cand, best)) best = cand;
  }
  return best;
}

struct Builder {
  const DesignMatrix& m;
  const TreeParams& params;
  Rng& rng;
  std::vector<TreeNode> nodes;
  std::vector<std::pair<double, int>> scratch;

  std::optional<Split> choose(std::span<const std::size_t> rows,
                              ClassCounts parent) {
    const std::size_t cols = m.n_cols();
    std::optional<Split> best;
    const auto consider = [&](std::size_t f) {
      auto cand = scan_feature(m, rows, f, parent, params.criterion, scratch);
      if (cand && better(*cand, best)) best = cand;
      return cand.has_value();
    };
    if (!params.feature_subsample || *params.feature_subsample >= cols) {
      for (std::size_t f = 0; f < cols; ++f) consider(f);
      return best;
    }
    const std::size_t wanted = std::max<std::size_t>(1, *params.feature_subsample);
    std::size_t visited = 0;
    for (std::size_t f : rng.sample_without_replacement(cols, cols)) {
      if (consider(f) && ++visited == wanted) break;
    }
    return best;
  }

  void grow(std::vector<std::size_t> root_rows) {
    struct Task {
      std::vector<std::size_t> rows;
      std::uint32_t node;
      std::size_t depth;
    };
    nodes.emplace_back();
    std::vector<Task> stack;
    stack.push_back({std::move(root_rows), 0, 0});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      const ClassCounts counts = count_rows(m, task.rows);
      {
        TreeNode& node = nodes[task.node];
        node.counts = counts;
        node.probability =
            static_cast<double>(counts.n1) / static_cast<double>(counts.total());
      }
      const bool stop = counts.pure() ||
                        (params.max_depth && task.depth >= *params.max_depth) ||
                        task.rows.size() < params.min_samples_split;
      if (stop) continue;
      const auto split = choose(task.rows, counts);
      if (!split) continue;

      std::vector<std::size_t> left_rows, right_rows;
      for (std::size_t r : task.rows) {
        (m.x[r * m.n_cols() + split->feature] <= split->threshold ? left_rows
                                                                  : right_rows)
            .push_back(r);
      }
      const auto left = static_cast<std::uint32_t>(nodes.size());
      nodes.emplace_back();
      nodes.emplace_back();
      TreeNode& node = nodes[task.node];
      node.left = left;
      node.right = left + 1;
      node.feature = static_cast<std::uint32_t>(split->feature);
      node.threshold = split->threshold;
      stack.push_back({std::move(right_rows), left + 1, task.depth + 1});
      stack.push_back({std::move(left_rows), left, task.depth + 1});
    }
  }
};

}  // namespace

std::optional<Split> best_split(const DesignMatrix& m,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> features,
                                Criterion criterion) {
  if (rows.size() < 2) return std::nullopt;
  const ClassCounts parent = count_rows(m, rows);
  std::vector<std::pair<double, int>> scratch;
  std::optional<Split> best;
  for (std::size_t f : features) {
    if (f >= m.n_cols()) throw DimensionError("feature index out of range");
    auto cand = scan_feature(m, rows, f, parent, criterion, scratch);
    if (cand && better(*cand, best)) best = cand;
  }
  if (best && best->gain > kMinGain) return best;
  return std::nullopt;
}

CartTree::CartTree(TreeParams params, std::vector<TreeNode> nodes,
                   std::size_t n_features, std::uint64_t stream)
    : params_(std::move(params)),
      nodes_(std::move(nodes)),
      n_features_(n_features),
      stream_(stream) {
  if (nodes_.empty()) throw DomainError("tree has no nodes");
}

std::size_t CartTree::leaf_index(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw DimensionError("feature vector has " + std::to_string(x.size()) +
                         " values, tree expects " + std::to_string(n_features_));
  }
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return i;
}

double CartTree::predict_proba(std::span<const double> x) const {
  return nodes_[leaf_index(x)].probability;
}

std::size_t CartTree::depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t deepest = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) continue;
    depth[nodes_[i].left] = depth[nodes_[i].right] = depth[i] + 1;
    deepest = std::max(deepest, depth[i] + 1);
  }
  return deepest;
}

std::size_t CartTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const auto& n) { return n.is_leaf(); }));
}

CartTree fit_cart(const DesignMatrix& m, const TreeParams& params, Rng& rng,
                  std::span<const std::size_t> rows, std::uint64_t stream) {
  if (m.n_rows() == 0) throw TrainingError("cannot grow a tree on no rows");
  std::vector<std::size_t> root(rows.begin(), rows.end());
  if (root.empty()) {
    root.resize(m.n_rows());
    std::iota(root.begin(), root.end(), std::size_t{0});
  }
  Builder builder{m, params, rng, {}, {}};
  builder.grow(std::move(root));
  return CartTree(params, std::move(builder.nodes), m.n_cols(), stream);
}

Forest fit_forest(const DesignMatrix& m, const ForestConfig& config) {
  if (config.n_trees == 0) throw DomainError("forest needs at least one tree");
  if (m.n_rows() == 0) throw TrainingError("cannot grow a forest on no rows");

  TreeParams params = config.params;
  if (!params.feature_subsample) {
    params.feature_subsample = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(m.n_cols()))));
  }

  Forest forest;
  forest.seed = config.seed;
  forest.bootstrap = config.bootstrap;
  forest.n_features = m.n_cols();
  forest.trees.resize(config.n_trees);

  const std::size_t n = m.n_rows();
  auto grow_tree = [&](std::size_t t) {
    Rng rng(config.seed, t);
    std::vector<std::size_t> rows(n);
    if (config.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t] = fit_cart(m, params, rng, rows, t);
  };

  std::size_t threads = config.threads != 0
                            ? config.threads
                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.n_trees);
  if (threads <= 1) {
    for (std::size_t t = 0; t < config.n_trees; ++t) grow_tree(t);
    return forest;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < config.n_trees; t = next++) {
          try {
            grow_tree(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return forest;
}

double predict_proba(const Forest& forest, std::span<const double> x) {
  if (forest.trees.empty()) throw DomainError("forest has no trees");
  std::vector<double> votes;
  votes.reserve(forest.trees.size());
  for (const auto& tree : forest.trees) votes.push_back(tree.predict_proba(x));
  std::sort(votes.begin(), votes.end());
  double sum = 0.0;
  for (double v : votes) sum += v;
  return sum / static_cast<double>(votes.size());
}

std::vector<double> predict_proba_rows(const Forest& forest,
                                       const DesignMatrix& m) {
  if (m.n_cols() != forest.n_features) {
    throw DimensionError("matrix has " + std::to_string(m.n_cols()) +
                         " columns, forest expects " +
                         std::to_string(forest.n_features));
  }
  std::vector<double> out(m.n_rows());
  for (std::size_t r = 0; r < m.n_rows(); ++r) out[r] = predict_proba(forest, m.row(r));
  return out;
}

}  // namespace creditworks
