#pragma once

#include <vector>

#include "rulkit/nn/network.hpp"

namespace rulkit::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are allocated lazily on the
/// first step and must stay congruent with the parameter list afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig cfg) : cfg_(cfg) {}

  /// One update over parallel parameter/gradient tensor lists.
  void step(const std::vector<TensorRef>& params, const std::vector<TensorRef>& grads);

  long t() const { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Vector> m_;
  std::vector<Vector> v_;
};

}  // namespace rulkit::nn
