#include "rulkit/lime.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit::lime {

void ExplainConfig::validate() const {
  if (n_samples < 100) throw Error("n_samples must be >= 100");
  if (ridge < 0.0) throw Error("ridge strength must be >= 0");
  if (top_k < 1) throw Error("top_k must be >= 1");
}

double ExplainConfig::effective_width(int d) const {
  if (kernel_width > 0.0) return kernel_width;
  return 0.75 * std::sqrt(static_cast<double>(d));
}

Eigen::MatrixXd perturb(const Eigen::RowVectorXd& instance,
                        const Eigen::VectorXd& feature_std, const ExplainConfig& cfg) {
  cfg.validate();
  const Eigen::Index d = instance.size();
  if (feature_std.size() != d) {
    throw ShapeMismatch("perturb: instance and std dimensions differ");
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd samples(cfg.n_samples, d);
  samples.row(0) = instance;
  for (int i = 1; i < cfg.n_samples; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      samples(i, j) = instance(j) + feature_std(j) * gauss(rng);
    }
  }
  return samples;
}

Eigen::VectorXd kernel_weights(const Eigen::MatrixXd& samples,
                               const Eigen::RowVectorXd& instance, double width) {
  Eigen::VectorXd w(samples.rows());
  const double w2 = width * width;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double d2 = (samples.row(i) - instance).squaredNorm();
    w(i) = std::exp(-d2 / w2);
  }
  return w;
}

Surrogate fit_surrogate(const Eigen::MatrixXd& samples, const Eigen::VectorXd& target,
                        const Eigen::VectorXd& weights, double ridge) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (target.size() != n || weights.size() != n) {
    throw LengthMismatch("fit_surrogate: sample/target/weight sizes differ");
  }

  // Augmented design [1 | Z]; ridge applies to every column but the intercept.
  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = samples;

  const Eigen::MatrixXd wd = weights.asDiagonal() * design;
  Eigen::MatrixXd normal = design.transpose() * wd;
  normal.bottomRightCorner(d, d) += ridge * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd rhs = design.transpose() * weights.cwiseProduct(target);

  Eigen::VectorXd beta;
  if (ridge > 0.0) {
    beta = normal.ldlt().solve(rhs);
  } else {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
    if (qr.rank() < normal.rows()) {
      throw SingularSystem("surrogate normal equations are rank-deficient with ridge 0");
    }
    beta = qr.solve(rhs);
  }
  if (!beta.allFinite()) {
    throw SingularSystem("surrogate solve produced non-finite coefficients");
  }

  Surrogate s;
  s.intercept = beta(0);
  s.coef = beta.tail(d);

  const Eigen::VectorXd fitted = design * beta;
  const double wsum = weights.sum();
  const double mean_w = weights.dot(target) / wsum;
  const double ss_res = weights.dot((target - fitted).cwiseAbs2());
  const double ss_tot = weights.dot((target.array() - mean_w).cwiseAbs2().matrix());
  s.fidelity = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return s;
}

Explanation explain_instance(const RowPredictor& model, const Eigen::RowVectorXd& instance,
                             const std::vector<std::string>& feature_names,
                             const Eigen::VectorXd& feature_std, int explained_class,
                             const ExplainConfig& cfg, const std::string& instance_id) {
  cfg.validate();
  const Eigen::Index d = instance.size();
  if (static_cast<Eigen::Index>(feature_names.size()) != d) {
    throw ShapeMismatch("explain_instance: feature name count mismatch");
  }
  if (explained_class != 0 && explained_class != 1) {
    throw Error("explained class must be 0 or 1");
  }

  const Eigen::MatrixXd samples = perturb(instance, feature_std, cfg);
  const Eigen::VectorXd w = kernel_weights(samples, instance,
                                           cfg.effective_width(static_cast<int>(d)));

  Eigen::VectorXd p1 = model(samples);
  if (p1.size() != samples.rows()) {
    throw ShapeMismatch("black box returned wrong number of probabilities");
  }
  const Eigen::VectorXd target =
      explained_class == 1 ? p1 : (1.0 - p1.array()).matrix();

  const Surrogate s = fit_surrogate(samples, target, w, cfg.ridge);

  Explanation e;
  e.instance_id = instance_id;
  e.explained_class = explained_class;
  e.prob_class1 = p1(0);
  e.prob_class0 = 1.0 - p1(0);
  e.intercept = s.intercept;
  e.fidelity = s.fidelity;
  e.seed = cfg.seed;

  std::vector<int> order(d);
  for (Eigen::Index j = 0; j < d; ++j) order[j] = static_cast<int>(j);
  // Scale-aware ranking: a coefficient only matters over the range the
  // feature actually moves.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(s.coef(a) * feature_std(a)) > std::abs(s.coef(b) * feature_std(b));
  });
  const int keep = std::min<int>(cfg.top_k, static_cast<int>(d));
  for (int r = 0; r < keep; ++r) {
    const int j = order[r];
    if (s.coef(j) * feature_std(j) == 0.0) break;  // constant or irrelevant
    e.weights.push_back({feature_names[j], s.coef(j)});
  }
  return e;
}

std::string render_report(const Explanation& e) {
  std::ostringstream out;
  out << "instance " << e.instance_id << "\n";
  out << "black-box probabilities: class0=" << format_double(e.prob_class0)
      << " class1=" << format_double(e.prob_class1) << "\n";
  out << "explained class: " << e.explained_class
      << "  surrogate fidelity (weighted R^2): " << format_double(e.fidelity) << "\n";
  out << "intercept: " << format_double(e.intercept) << "\n";
  double max_w = 1e-300;
  for (const FeatureWeight& fw : e.weights) max_w = std::max(max_w, std::abs(fw.weight));
  for (const FeatureWeight& fw : e.weights) {
    const int bar = static_cast<int>(std::lround(20.0 * std::abs(fw.weight) / max_w));
    const int toward = fw.weight >= 0.0 ? e.explained_class : 1 - e.explained_class;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-12s %+12.6f ", fw.feature.c_str(), fw.weight);
    out << buf << std::string(bar, '#') << " -> increases chance of class " << toward
        << "\n";
  }
  return out.str();
}

std::string to_record(const Explanation& e) {
  nlohmann::ordered_json j;
  j["instance"] = e.instance_id;
  j["class"] = e.explained_class;
  j["probabilities"] = {e.prob_class0, e.prob_class1};
  j["intercept"] = e.intercept;
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  for (const FeatureWeight& fw : e.weights) {
    ws.push_back({{"feature", fw.feature}, {"weight", fw.weight}});
  }
  j["weights"] = ws;
  j["fidelity"] = e.fidelity;
  j["seed"] = e.seed;
  return j.dump(2) + "\n";
}

Explanation from_record(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Explanation e;
  e.instance_id = j.at("instance").get<std::string>();
  e.explained_class = j.at("class").get<int>();
  e.prob_class0 = j.at("probabilities").at(0).get<double>();
  e.prob_class1 = j.at("probabilities").at(1).get<double>();
  e.intercept = j.at("intercept").get<double>();
  for (const auto& w : j.at("weights")) {
    e.weights.push_back({w.at("feature").get<std::string>(), w.at("weight").get<double>()});
  }
  e.fidelity = j.at("fidelity").get<double>();
  e.seed = j.at("seed").get<std::uint64_t>();
  return e;
}

}  // namespace rulkit::lime
