#include "rulkit/classifier.hpp"

#include "rulkit/error.hpp"
#include "rulkit/nn/trainer.hpp"

namespace rulkit {

std::string family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::rnn: return "rnn";
    case ModelFamily::birnn: return "birnn";
    case ModelFamily::lstm: return "lstm";
    case ModelFamily::bilstm: return "bilstm";
    case ModelFamily::gru: return "gru";
    case ModelFamily::rf: return "rf";
    case ModelFamily::knn: return "knn";
    case ModelFamily::nb: return "nb";
    case ModelFamily::gbm: return "gbm";
  }
  return "?";
}

ModelFamily family_from_name(const std::string& name) {
  if (name == "rnn") return ModelFamily::rnn;
  if (name == "birnn") return ModelFamily::birnn;
  if (name == "lstm") return ModelFamily::lstm;
  if (name == "bilstm") return ModelFamily::bilstm;
  if (name == "gru") return ModelFamily::gru;
  if (name == "rf") return ModelFamily::rf;
  if (name == "knn") return ModelFamily::knn;
  if (name == "nb") return ModelFamily::nb;
  if (name == "gbm") return ModelFamily::gbm;
  throw UsageError("unknown model family: " + name);
}

bool is_sequence_family(ModelFamily f) {
  switch (f) {
    case ModelFamily::rnn:
    case ModelFamily::birnn:
    case ModelFamily::lstm:
    case ModelFamily::bilstm:
    case ModelFamily::gru:
      return true;
    default:
      return false;
  }
}

Eigen::VectorXd TrainedClassifier::predict_proba_rows(const Eigen::MatrixXd& x) const {
  if (is_sequence_model()) {
    throw ShapeMismatch("sequence model " + family_name(family) +
                        " has no per-row prediction surface");
  }
  if (x.cols() != static_cast<Eigen::Index>(feature_names.size())) {
    throw ShapeMismatch("expected " + std::to_string(feature_names.size()) +
                        " features, got " + std::to_string(x.cols()));
  }
  return std::visit(
      [&](const auto& m) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, nn::Network>) {
          throw ShapeMismatch("unreachable: network behind a row family");
        } else {
          return m.predict_proba(x);
        }
      },
      model);
}

Eigen::VectorXd TrainedClassifier::predict_proba_windows(const SequenceTensor& t) const {
  if (!is_sequence_model()) {
    throw ShapeMismatch("row model " + family_name(family) +
                        " has no windowed prediction surface");
  }
  if (t.num_features != static_cast<int>(feature_names.size())) {
    throw ShapeMismatch("expected " + std::to_string(feature_names.size()) +
                        " features, got " + std::to_string(t.num_features));
  }
  if (t.window_len != window_len) {
    throw ShapeMismatch("expected window length " + std::to_string(window_len) +
                        ", got " + std::to_string(t.window_len));
  }
  return nn::predict_proba(network(), t);
}

const nn::Network& TrainedClassifier::network() const {
  const auto* net = std::get_if<nn::Network>(&model);
  if (net == nullptr) throw Error("classifier does not hold a network");
  return *net;
}

}  // namespace rulkit
