#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rulkit::lime {

struct ExplainConfig {
  int n_samples = 5000;
  double kernel_width = -1.0;  // <= 0: default 0.75 * sqrt(d)
  double ridge = 1e-3;
  int top_k = 10;
  std::uint64_t seed = 42;

  void validate() const;
  double effective_width(int d) const;
};

/// Black box restricted to what the explainer needs: positive-class
/// probability per feature row. Sequence models expose no such row
/// interface, which is exactly why they cannot be explained here.
using RowPredictor = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

/// Gaussian perturbations around the instance with per-feature standard
/// deviations taken from the training data; row 0 is the instance itself.
Eigen::MatrixXd perturb(const Eigen::RowVectorXd& instance,
                        const Eigen::VectorXd& feature_std, const ExplainConfig& cfg);

/// w_i = exp(-||z_i - x||^2 / width^2) over the normalized feature space.
Eigen::VectorXd kernel_weights(const Eigen::MatrixXd& samples,
                               const Eigen::RowVectorXd& instance, double width);

struct Surrogate {
  double intercept = 0.0;
  Eigen::VectorXd coef;
  double fidelity = 0.0;  // weighted R^2 on the perturbation sample
};

/// Weighted ridge regression (intercept unpenalized) via the normal
/// equations. Throws SingularSystem when ridge == 0 and the design is
/// rank-deficient.
Surrogate fit_surrogate(const Eigen::MatrixXd& samples, const Eigen::VectorXd& target,
                        const Eigen::VectorXd& weights, double ridge);

struct FeatureWeight {
  std::string feature;
  double weight = 0.0;
};

struct Explanation {
  std::string instance_id;
  int explained_class = 1;
  double prob_class0 = 0.0;  // black-box probabilities at the instance
  double prob_class1 = 0.0;
  double intercept = 0.0;
  std::vector<FeatureWeight> weights;  // sorted by scale-aware magnitude
  double fidelity = 0.0;
  std::uint64_t seed = 0;
};

/// Perturb -> weigh -> fit -> rank. The surrogate is fitted to the
/// probability of `explained_class`; weights are ranked by
/// |coefficient * feature_std| and truncated to top_k.
Explanation explain_instance(const RowPredictor& model, const Eigen::RowVectorXd& instance,
                             const std::vector<std::string>& feature_names,
                             const Eigen::VectorXd& feature_std, int explained_class,
                             const ExplainConfig& cfg, const std::string& instance_id);

/// Human-readable block with class probabilities and signed feature bars.
std::string render_report(const Explanation& e);

/// Lossless structured record (JSON with fields `probabilities`,
/// `intercept`, `weights`, `fidelity`).
std::string to_record(const Explanation& e);
Explanation from_record(const std::string& json_text);

}  // namespace rulkit::lime
