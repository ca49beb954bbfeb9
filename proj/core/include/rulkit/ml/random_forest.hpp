#pragma once

#include <cstdint>
#include <vector>

#include "rulkit/ml/decision_tree.hpp"

namespace rulkit::ml {

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 0;       // 0 = unlimited
  int max_features = -1;   // -1 = floor(sqrt(d)); 0 = all
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// Bagged gini trees; predict_proba is the mean of leaf class-1 fractions.
/// Per-tree RNG streams are derived from (seed, tree index), so fitting is
/// reproducible regardless of scheduling.
class RandomForest {
 public:
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y, const ForestConfig& cfg);

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::vector<DecisionTree>& trees() { return trees_; }
  ForestConfig& config() { return cfg_; }
  const ForestConfig& config() const { return cfg_; }

 private:
  ForestConfig cfg_;
  std::vector<DecisionTree> trees_;
};

}  // namespace rulkit::ml
