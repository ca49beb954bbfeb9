#include "rulkit/ml/gradient_boosting.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rulkit/error.hpp"

namespace rulkit::ml {

namespace {
double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}
}  // namespace

void GradientBoosting::fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const GbmConfig& cfg) {
  if (x.rows() == 0) throw rulkit::EmptyDataset("gradient boosting: empty training set");
  if (y.size() != static_cast<std::size_t>(x.rows())) {
    throw rulkit::LengthMismatch("gradient boosting: target length mismatch");
  }
  cfg_ = cfg;
  trees_.clear();

  const int n = static_cast<int>(x.rows());
  double base = 0.0;
  for (int v : y) base += v != 0 ? 1.0 : 0.0;
  base /= static_cast<double>(n);
  base = std::clamp(base, 1e-12, 1.0 - 1e-12);
  init_score_ = std::log(base / (1.0 - base));

  std::vector<double> score(n, init_score_);
  std::vector<double> residual(n);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  TreeConfig tree_cfg;
  tree_cfg.max_depth = cfg.max_depth;
  tree_cfg.max_features = cfg.max_features;
  tree_cfg.regression = true;

  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x517cc1b727220a95ULL);

  for (int m = 0; m < cfg.n_estimators; ++m) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      p[i] = stable_sigmoid(score[i]);
      residual[i] = (y[i] != 0 ? 1.0 : 0.0) - p[i];
    }

    DecisionTree tree;
    tree.fit(x, residual, all, tree_cfg, rng);

    // Replace each leaf's mean-residual value with a Newton step over the
    // samples that landed there: sum(residual) / sum(p*(1-p)).
    std::unordered_map<int, std::pair<double, double>> leaf_stats;
    std::vector<int> leaf_of(n);
    for (int i = 0; i < n; ++i) {
      const int leaf = tree.apply(x.row(i));
      leaf_of[i] = leaf;
      auto& [num, den] = leaf_stats[leaf];
      num += residual[i];
      den += p[i] * (1.0 - p[i]);
    }
    for (auto& [leaf, stats] : leaf_stats) {
      const auto [num, den] = stats;
      tree.nodes()[leaf].value1 = den < 1e-150 ? 0.0 : num / den;
    }
    for (int i = 0; i < n; ++i) {
      score[i] += cfg.learning_rate * tree.nodes()[leaf_of[i]].value1;
    }
    trees_.push_back(std::move(tree));
  }
}

double GradientBoosting::predict_one(
    const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  double score = init_score_;
  for (const DecisionTree& t : trees_) {
    score += cfg_.learning_rate * t.predict_value(row);
  }
  return stable_sigmoid(score);
}

Eigen::VectorXd GradientBoosting::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict_one(x.row(i));
  return out;
}

}  // namespace rulkit::ml
