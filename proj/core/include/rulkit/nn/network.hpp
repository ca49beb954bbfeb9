#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "rulkit/nn/layers.hpp"

namespace rulkit::nn {

struct RecurrentSpec {
  CellKind cell = CellKind::rnn;
  int units = 0;
  bool bidirectional = false;
};
struct DropoutSpec {
  double rate = 0.0;
};
struct DenseSpec {
  int units = 0;
  Activation act = Activation::identity;
};
using LayerSpec = std::variant<RecurrentSpec, DropoutSpec, DenseSpec>;

/// Architecture description. Layers run in order over (seq_len x
/// input_features) windows; the last recurrent layer emits its final-step
/// state, and everything after it operates on those row vectors.
struct NetworkSpec {
  int input_features = 0;
  int seq_len = 0;
  std::vector<LayerSpec> layers;

  /// Throws ShapeMismatch / Error on inconsistent dimensions, dense layers
  /// before the last recurrent layer, or dropout outside [0, 1).
  void validate() const;

  /// Compact one-line form, e.g. "lstm:100 dropout:0.5 lstm:50 dense:1:sigmoid".
  /// Bidirectional cells carry a "bi" prefix ("bilstm:100").
  std::string describe() const;
  static NetworkSpec parse(int input_features, int seq_len, const std::string& text);

  int output_units() const;
};

/// Trainable parameter total from the per-layer closed forms.
long count_params(const NetworkSpec& spec);

/// Named view into one parameter array of a network. `data` aliases the
/// column-major Eigen storage; rows/cols describe the logical shape.
struct TensorRef {
  std::string name;
  double* data = nullptr;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index size = 0;
};

enum class Mode { train, infer };

struct NetworkCache;

/// A stack of recurrent/dropout/dense layers with owned weights.
/// Forward/backward are deterministic given the dropout RNG state.
class Network {
 public:
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }

  void init_weights(std::uint64_t seed);

  /// Brute-force enumeration of owned parameter elements; matches
  /// count_params(spec()) by construction.
  long param_count() const;

  /// Stable-ordered named parameter arrays (used by the optimizer,
  /// checkpoints, and gradient checks).
  std::vector<TensorRef> tensors();
  std::vector<TensorRef> tensors() const;  // refs remain mutable views

  struct Forward {
    Vector prob;    // positive-class probability per window
    Matrix output;  // raw head output (batch x output_units)
    std::unique_ptr<NetworkCache> cache;  // only in train mode

    Forward();
    Forward(Forward&&) noexcept;
    Forward& operator=(Forward&&) noexcept;
    ~Forward();
  };

  /// rng drives dropout masks and is consumed only in train mode on
  /// networks that contain dropout layers.
  Forward forward(const SeqBatch& x, Mode mode, std::mt19937_64* rng = nullptr) const;

  /// Gradient of a scalar loss w.r.t. all weights, given the gradient of
  /// that loss w.r.t. the head output. The input batch is taken from the
  /// forward cache. Throws NonFiniteGradient if anything non-finite appears.
  Network backward(const Forward& fwd, const Matrix& d_output) const;

  /// Positive-class probability for one window batch (infer mode).
  Vector predict(const SeqBatch& x) const;

  /// Flat copy of every parameter value (snapshot/restore for early stopping).
  Vector save_flat() const;
  void load_flat(const Vector& flat);

 private:
  struct RecurrentLayer {
    RecurrentSpec spec;
    CellParams fw;
    CellParams bw;  // engaged only when spec.bidirectional
  };
  struct DropoutLayer {
    double rate;
  };
  struct DenseLayer {
    DenseParams p;
  };
  using Layer = std::variant<RecurrentLayer, DropoutLayer, DenseLayer>;

  NetworkSpec spec_;
  std::vector<Layer> layers_;
  int last_recurrent_ = -1;  // index of the sequence->rows transition

  friend struct NetworkCache;
};

/// Positive-class probability from a head output matrix: column 0 for a
/// 1-unit sigmoid head, column 1 for a 2-unit softmax head.
Vector head_probability(const Matrix& output);

}  // namespace rulkit::nn
