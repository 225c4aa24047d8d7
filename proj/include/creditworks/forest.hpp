#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "creditworks/dataset.hpp"
#include "creditworks/rng.hpp"

namespace creditworks {

enum class Criterion { gini, entropy };

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view text);

struct ClassCounts {
  std::size_t n0 = 0;
  std::size_t n1 = 0;

  std::size_t total() const { return n0 + n1; }
  bool pure() const { return n0 == 0 || n1 == 0; }
  bool operator==(const ClassCounts&) const = default;
};

double gini(std::size_t n0, std::size_t n1);
// Base 2, with 0 * log 0 = 0.
double entropy(std::size_t n0, std::size_t n1);
double impurity(ClassCounts counts, Criterion criterion);

// impurity(parent) - sum_k |child_k| / |parent| * impurity(child_k).
// Throws DomainError unless left + right == parent and parent is non-empty.
double information_gain(ClassCounts parent, ClassCounts left,
                        ClassCounts right, Criterion criterion);

// Gains at or below this are treated as zero (rounding noise on splits
// whose children repeat the parent's class ratio).
inline constexpr double kMinGain = 1e-12;

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;  // rows with x[feature] <= threshold go left
  double gain = 0.0;
};

// Scans the midpoints between consecutive distinct values of every listed
// feature over `rows` (duplicates allowed). Highest gain wins; ties go to
// the lowest feature index, then the lowest threshold. Returns nullopt when
// the best gain is not positive.
std::optional<Split> best_split(const DesignMatrix& m,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> features,
                                Criterion criterion);

struct TreeParams {
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_samples_split = 2;
  Criterion criterion = Criterion::gini;
  // Features examined per node; nullopt = all.
  std::optional<std::size_t> feature_subsample;
};

struct TreeNode {
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t left = kNone;
  std::uint32_t right = kNone;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  ClassCounts counts;
  double probability = 0.0;  // n1 / (n0 + n1)

  bool is_leaf() const { return left == kNone; }
};

class CartTree {
 public:
  CartTree() = default;
  CartTree(TreeParams params, std::vector<TreeNode> nodes, std::size_t n_features,
           std::uint64_t stream = 0);

  const TreeParams& params() const { return params_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t n_features() const { return n_features_; }
  // Index of the (seed, stream) random stream that grew this tree.
  std::uint64_t stream() const { return stream_; }

  std::size_t leaf_index(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const { return nodes_.size() - leaf_count(); }

 private:
  TreeParams params_;
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
  std::uint64_t stream_ = 0;
};

// Grows a CART tree on `rows` of m (all rows when empty). A node becomes a
// leaf when it is pure, has reached max_depth, holds fewer than
// min_samples_split rows, or no feature varies within it. Otherwise it is
// split at the best candidate, even if that candidate's gain is zero, so an
// unrestricted tree fits any training set without contradictory
// duplicates exactly. With feature_subsample = k < n_cols, each node draws
// a random feature order from `rng` and scans it until k non-constant
// features have been examined.
CartTree fit_cart(const DesignMatrix& m, const TreeParams& params, Rng& rng,
                  std::span<const std::size_t> rows = {},
                  std::uint64_t stream = 0);

struct ForestConfig {
  std::size_t n_trees = 100;
  TreeParams params;  // feature_subsample unset -> ceil(sqrt(n_cols))
  std::uint64_t seed = 0;
  bool bootstrap = true;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct Forest {
  std::vector<CartTree> trees;
  std::uint64_t seed = 0;
  bool bootstrap = true;
  std::size_t n_features = 0;

  std::size_t n_trees() const { return trees.size(); }
};

// Tree i draws its bootstrap sample and feature orders from Rng(seed, i),
// so the result does not depend on the thread schedule.
Forest fit_forest(const DesignMatrix& m, const ForestConfig& config);

// Mean of the trees' leaf probabilities. Summed in sorted order so the
// result is exactly invariant to the order of the tree list.
double predict_proba(const Forest& forest, std::span<const double> x);
std::vector<double> predict_proba_rows(const Forest& forest,
                                       const DesignMatrix& m);

}  // namespace creditworks
