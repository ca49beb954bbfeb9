#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rulkit::ml {

struct KnnConfig {
  int k = 3;  // odd avoids vote ties in the binary case
};

/// Exhaustive k-nearest-neighbors over Euclidean distance. Distance ties are
/// broken by the lower training-row index, making predictions exactly
/// reproducible against a brute-force scan.
class Knn {
 public:
  void fit(Eigen::MatrixXd x, std::vector<int> y, const KnnConfig& cfg);

  /// Positive-class vote fraction among the k nearest neighbors.
  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;

  const Eigen::MatrixXd& train_x() const { return x_; }
  const std::vector<int>& train_y() const { return y_; }
  const KnnConfig& config() const { return cfg_; }

 private:
  KnnConfig cfg_;
  Eigen::MatrixXd x_;
  std::vector<int> y_;
};

}  // namespace rulkit::ml
