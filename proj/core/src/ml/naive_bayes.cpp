#include "rulkit/ml/naive_bayes.hpp"

#include <cmath>
#include <numbers>

#include "rulkit/error.hpp"

namespace rulkit::ml {

void GaussianNb::fit(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (x.rows() == 0) throw rulkit::EmptyDataset("naive bayes: empty training set");
  if (y.size() != static_cast<std::size_t>(x.rows())) {
    throw rulkit::LengthMismatch("naive bayes: target length mismatch");
  }
  const Eigen::Index d = x.cols();
  Eigen::Vector2d count{0.0, 0.0};
  mean_ = Eigen::MatrixXd::Zero(2, d);
  var_ = Eigen::MatrixXd::Zero(2, d);

  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[i] != 0 ? 1 : 0;
    count(c) += 1.0;
    mean_.row(c) += x.row(i);
  }
  if (count(0) == 0.0 || count(1) == 0.0) {
    throw rulkit::MissingClass("naive bayes: both classes need at least one sample");
  }
  mean_.row(0) /= count(0);
  mean_.row(1) /= count(1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[i] != 0 ? 1 : 0;
    var_.row(c) += (x.row(i) - mean_.row(c)).array().square().matrix();
  }
  var_.row(0) /= count(0);
  var_.row(1) /= count(1);
  var_ = var_.cwiseMax(kVarFloor);
  prior_ = count / count.sum();
}

void GaussianNb::set_params(Eigen::Vector2d prior, Eigen::MatrixXd mean,
                            Eigen::MatrixXd var) {
  prior_ = std::move(prior);
  mean_ = std::move(mean);
  var_ = var.cwiseMax(kVarFloor);
}

double GaussianNb::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  double log_post[2];
  for (int c = 0; c < 2; ++c) {
    double lp = std::log(prior_(c));
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      const double v = var_(c, j);
      const double diff = row(j) - mean_(c, j);
      lp += -0.5 * std::log(2.0 * std::numbers::pi * v) - diff * diff / (2.0 * v);
    }
    log_post[c] = lp;
  }
  // p1 = 1 / (1 + exp(lp0 - lp1)), stable for large magnitude differences
  const double delta = log_post[0] - log_post[1];
  if (delta > 700.0) return 0.0;
  if (delta < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(delta));
}

Eigen::VectorXd GaussianNb::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict_one(x.row(i));
  return out;
}

}  // namespace rulkit::ml
