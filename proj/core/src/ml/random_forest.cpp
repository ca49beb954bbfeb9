#include "rulkit/ml/random_forest.hpp"

#include <cmath>

#include "rulkit/error.hpp"

namespace rulkit::ml {

void RandomForest::fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const ForestConfig& cfg) {
  if (x.rows() == 0) throw rulkit::EmptyDataset("random forest: empty training set");
  if (y.size() != static_cast<std::size_t>(x.rows())) {
    throw rulkit::LengthMismatch("random forest: target length mismatch");
  }
  cfg_ = cfg;
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());

  TreeConfig tree_cfg;
  tree_cfg.max_depth = cfg.max_depth;
  tree_cfg.max_features =
      cfg.max_features < 0 ? std::max(1, static_cast<int>(std::sqrt(double(d))))
                           : cfg.max_features;

  std::vector<double> targets(y.begin(), y.end());
  trees_.assign(cfg.n_trees, DecisionTree{});

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < cfg.n_trees; ++t) {
    // Stream per tree: reproducible independent of thread scheduling.
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(t));
    std::vector<int> idx(n);
    if (cfg.bootstrap) {
      std::uniform_int_distribution<int> pick(0, n - 1);
      for (int i = 0; i < n; ++i) idx[i] = pick(rng);
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    trees_[t].fit(x, targets, idx, tree_cfg, rng);
  }
}

double RandomForest::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  double sum = 0.0;
  for (const DecisionTree& t : trees_) sum += t.predict_value(row);
  return sum / static_cast<double>(trees_.size());
}

Eigen::VectorXd RandomForest::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict_one(x.row(i));
  return out;
}

}  // namespace rulkit::ml
