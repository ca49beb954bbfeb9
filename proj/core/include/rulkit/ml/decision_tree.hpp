#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace rulkit::ml {

/// Flat binary tree stored in preorder: a node always precedes its subtrees
/// and left == parent index + 1.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value0 = 0.0;  // classification: class-0 fraction
  double value1 = 0.0;  // classification: class-1 fraction; regression: value
};

struct TreeConfig {
  int max_depth = 0;         // 0 = unlimited
  int max_features = 0;      // 0 = all; otherwise random candidates per split
  int min_samples_split = 2;
  bool regression = false;   // squared-error splits instead of gini
};

/// CART-style binary tree. Classification trees split on gini impurity and
/// store class fractions at the leaves; regression trees split on squared
/// error and store the leaf mean (which a booster may overwrite).
class DecisionTree {
 public:
  /// Fits on the rows selected by `sample_idx` (with repetitions allowed, as
  /// bootstrap draws produce). rng drives the per-split feature subsampling.
  void fit(const Eigen::MatrixXd& x, const std::vector<double>& y,
           const std::vector<int>& sample_idx, const TreeConfig& cfg,
           std::mt19937_64& rng);

  /// Leaf reached by one row.
  int apply(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  /// Positive-class fraction (classification) or value (regression).
  double predict_value(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  std::vector<TreeNode>& nodes() { return nodes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  int depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace rulkit::ml
