#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rulkit/features.hpp"
#include "rulkit/ml/gradient_boosting.hpp"
#include "rulkit/ml/knn.hpp"
#include "rulkit/ml/naive_bayes.hpp"
#include "rulkit/ml/random_forest.hpp"
#include "rulkit/nn/network.hpp"

namespace rulkit {

enum class ModelFamily { rnn, birnn, lstm, bilstm, gru, rf, knn, nb, gbm };

std::string family_name(ModelFamily f);
ModelFamily family_from_name(const std::string& name);
bool is_sequence_family(ModelFamily f);

/// One trained model of any family behind a single predict-probability
/// surface. Sequence models consume windowed tensors; row models consume
/// per-cycle feature rows. Asking for the wrong one throws ShapeMismatch.
struct TrainedClassifier {
  ModelFamily family = ModelFamily::rf;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;
  std::string config_hash;
  int window_len = 0;  // sequence families only

  std::variant<ml::RandomForest, ml::Knn, ml::GaussianNb, ml::GradientBoosting,
               nn::Network>
      model{ml::RandomForest{}};

  bool is_sequence_model() const { return is_sequence_family(family); }

  /// Positive-class probability per feature row (row families only).
  Eigen::VectorXd predict_proba_rows(const Eigen::MatrixXd& x) const;

  /// Positive-class probability per window (sequence families only).
  Eigen::VectorXd predict_proba_windows(const SequenceTensor& t) const;

  const nn::Network& network() const;
};

}  // namespace rulkit
