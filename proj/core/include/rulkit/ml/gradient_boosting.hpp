#pragma once

#include <cstdint>
#include <vector>

#include "rulkit/ml/decision_tree.hpp"

namespace rulkit::ml {

struct GbmConfig {
  int n_estimators = 20;
  double learning_rate = 0.5;
  int max_depth = 2;
  int max_features = 2;
  std::uint64_t seed = 0;
};

/// Stagewise boosting of regression trees on the negative gradient of the
/// binomial deviance. The initial score is the log-odds of the base rate;
/// leaf values are single Newton steps; prediction is
/// sigmoid(init + lr * sum of tree outputs).
class GradientBoosting {
 public:
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y, const GbmConfig& cfg);

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;

  double init_score() const { return init_score_; }
  void set_init_score(double s) { init_score_ = s; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::vector<DecisionTree>& trees() { return trees_; }
  GbmConfig& config() { return cfg_; }
  const GbmConfig& config() const { return cfg_; }

 private:
  GbmConfig cfg_;
  double init_score_ = 0.0;
  std::vector<DecisionTree> trees_;
};

}  // namespace rulkit::ml
