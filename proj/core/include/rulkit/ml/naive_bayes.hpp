#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rulkit::ml {

/// Gaussian naive Bayes for the binary target. Posteriors are evaluated in
/// log space; per-feature variances are floored at 1e-9.
class GaussianNb {
 public:
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y);

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;

  double prior(int cls) const { return prior_[cls]; }
  const Eigen::MatrixXd& means() const { return mean_; }    // 2 x d
  const Eigen::MatrixXd& variances() const { return var_; } // 2 x d
  void set_params(Eigen::Vector2d prior, Eigen::MatrixXd mean, Eigen::MatrixXd var);

  static constexpr double kVarFloor = 1e-9;

 private:
  Eigen::Vector2d prior_{0.5, 0.5};
  Eigen::MatrixXd mean_;
  Eigen::MatrixXd var_;
};

}  // namespace rulkit::ml
