#include "rulkit/ml/knn.hpp"

#include <algorithm>

#include "rulkit/error.hpp"

namespace rulkit::ml {

void Knn::fit(Eigen::MatrixXd x, std::vector<int> y, const KnnConfig& cfg) {
  if (x.rows() == 0) throw rulkit::EmptyDataset("knn: empty training set");
  if (y.size() != static_cast<std::size_t>(x.rows())) {
    throw rulkit::LengthMismatch("knn: target length mismatch");
  }
  if (cfg.k < 1 || cfg.k > x.rows()) {
    throw rulkit::Error("knn: k must lie in [1, n_train]");
  }
  cfg_ = cfg;
  x_ = std::move(x);
  y_ = std::move(y);
}

double Knn::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const int n = static_cast<int>(x_.rows());
  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    dist[i] = {(x_.row(i) - row).squaredNorm(), i};
  }
  std::nth_element(dist.begin(), dist.begin() + (cfg_.k - 1), dist.end());
  std::sort(dist.begin(), dist.begin() + cfg_.k);
  double votes = 0.0;
  for (int i = 0; i < cfg_.k; ++i) votes += y_[dist[i].second];
  return votes / static_cast<double>(cfg_.k);
}

Eigen::VectorXd Knn::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict_one(x.row(i));
  return out;
}

}  // namespace rulkit::ml
