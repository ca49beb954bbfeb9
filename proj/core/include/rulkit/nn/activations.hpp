#pragma once

#include <Eigen/Dense>
#include <string>

namespace rulkit::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { identity, relu, sigmoid, tanh, softmax };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

inline Matrix sigmoid(const Matrix& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

/// Applies `act` rowwise (softmax) or elementwise (everything else).
Matrix apply_activation(Activation act, const Matrix& z);

/// Gradient through the activation given its *output* y and upstream dy.
Matrix activation_backward(Activation act, const Matrix& y, const Matrix& dy);

}  // namespace rulkit::nn
