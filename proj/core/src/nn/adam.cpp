#include "rulkit/nn/adam.hpp"

#include <cmath>

#include "rulkit/error.hpp"

namespace rulkit::nn {

void Adam::step(const std::vector<TensorRef>& params,
                const std::vector<TensorRef>& grads) {
  if (params.size() != grads.size()) {
    throw ShapeMismatch("adam: parameter/gradient list size mismatch");
  }
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const TensorRef& p : params) {
      m_.push_back(Vector::Zero(p.size));
      v_.push_back(Vector::Zero(p.size));
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size != grads[i].size || params[i].size != m_[i].size()) {
      throw ShapeMismatch("adam: tensor " + params[i].name + " changed shape");
    }
    Eigen::Map<Vector> w(params[i].data, params[i].size);
    Eigen::Map<const Vector> g(grads[i].data, grads[i].size);
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    const Eigen::ArrayXd m_hat = m_[i].array() / bc1;
    const Eigen::ArrayXd v_hat = v_[i].array() / bc2;
    w.array() -= cfg_.learning_rate * m_hat / (v_hat.sqrt() + cfg_.epsilon);
  }
}

}  // namespace rulkit::nn
