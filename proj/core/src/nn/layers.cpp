#include "rulkit/nn/layers.hpp"

#include <cmath>

#include "rulkit/error.hpp"

namespace rulkit::nn {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::softmax: return "softmax";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "softmax") return Activation::softmax;
  throw Error("unknown activation: " + name);
}

Matrix apply_activation(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::identity:
      return z;
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::sigmoid:
      return sigmoid(z);
    case Activation::tanh:
      return z.array().tanh().matrix();
    case Activation::softmax: {
      Matrix out(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        Eigen::ArrayXd row = z.row(r).array() - z.row(r).maxCoeff();
        row = row.exp();
        out.row(r) = (row / row.sum()).matrix();
      }
      return out;
    }
  }
  return z;
}

Matrix activation_backward(Activation act, const Matrix& y, const Matrix& dy) {
  switch (act) {
    case Activation::identity:
      return dy;
    case Activation::relu:
      return (y.array() > 0.0).cast<double>().matrix().cwiseProduct(dy);
    case Activation::sigmoid:
      return (y.array() * (1.0 - y.array()) * dy.array()).matrix();
    case Activation::tanh:
      return ((1.0 - y.array().square()) * dy.array()).matrix();
    case Activation::softmax: {
      // dz_i = y_i * (dy_i - sum_j dy_j y_j), rowwise
      Matrix dz(y.rows(), y.cols());
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        const double dot = y.row(r).dot(dy.row(r));
        dz.row(r) = (y.row(r).array() * (dy.row(r).array() - dot)).matrix();
      }
      return dz;
    }
  }
  return dy;
}

std::string cell_name(CellKind k) {
  switch (k) {
    case CellKind::rnn: return "rnn";
    case CellKind::lstm: return "lstm";
    case CellKind::gru: return "gru";
  }
  return "?";
}

int cell_gates(CellKind k) {
  switch (k) {
    case CellKind::rnn: return 1;
    case CellKind::lstm: return 4;
    case CellKind::gru: return 3;
  }
  return 0;
}

CellParams::CellParams(CellKind kind, int input, int units)
    : kind(kind), input(input), units(units) {
  const int g = cell_gates(kind);
  w_in.assign(g, Matrix::Zero(units, input));
  w_rec.assign(g, Matrix::Zero(units, units));
  bias.assign(g, Vector::Zero(units));
}

namespace {

void glorot_fill(Matrix& m, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = dist(rng);
  }
}

}  // namespace

void CellParams::init_glorot(std::mt19937_64& rng) {
  for (auto& m : w_in) glorot_fill(m, rng);
  for (auto& m : w_rec) glorot_fill(m, rng);
  for (auto& b : bias) b.setZero();
  if (kind == CellKind::lstm) bias[1].setOnes();  // forget gate opens at start
}

long CellParams::param_count() const {
  long n = 0;
  for (const auto& m : w_in) n += m.size();
  for (const auto& m : w_rec) n += m.size();
  for (const auto& b : bias) n += b.size();
  return n;
}

void cell_forward(const CellParams& p, const SeqBatch& x, bool reverse, CellCache& cache) {
  if (x.dim() != p.input) {
    throw ShapeMismatch("cell expects " + std::to_string(p.input) + " inputs, got " +
                        std::to_string(x.dim()));
  }
  const int T = x.steps;
  const int B = x.batch;
  const int H = p.units;
  const int G = cell_gates(p.kind);

  cache.reverse = reverse;
  cache.h.resize(T * B, H);
  cache.gates.assign(G, Matrix(T * B, H));
  if (p.kind == CellKind::lstm) {
    cache.c.resize(T * B, H);
    cache.c_act.resize(T * B, H);
  }

  // Input projections for every step in one product per gate.
  std::vector<Matrix> proj(G);
  for (int g = 0; g < G; ++g) {
    proj[g].noalias() = x.data * p.w_in[g].transpose();
    proj[g].rowwise() += p.bias[g].transpose();
  }

  Matrix h_prev = Matrix::Zero(B, H);
  Matrix c_prev = Matrix::Zero(B, H);
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    const auto rows = [&](Matrix& m) { return m.middleRows(t * B, B); };
    switch (p.kind) {
      case CellKind::rnn: {
        Matrix a = proj[0].middleRows(t * B, B);
        a.noalias() += h_prev * p.w_rec[0].transpose();
        rows(cache.h) = a.array().tanh().matrix();
        rows(cache.gates[0]) = rows(cache.h);
        break;
      }
      case CellKind::lstm: {
        Matrix ai = proj[0].middleRows(t * B, B);
        Matrix af = proj[1].middleRows(t * B, B);
        Matrix ag = proj[2].middleRows(t * B, B);
        Matrix ao = proj[3].middleRows(t * B, B);
        ai.noalias() += h_prev * p.w_rec[0].transpose();
        af.noalias() += h_prev * p.w_rec[1].transpose();
        ag.noalias() += h_prev * p.w_rec[2].transpose();
        ao.noalias() += h_prev * p.w_rec[3].transpose();
        const Matrix i = sigmoid(ai);
        const Matrix f = sigmoid(af);
        const Matrix g = ag.array().tanh().matrix();
        const Matrix o = sigmoid(ao);
        Matrix c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
        rows(cache.gates[0]) = i;
        rows(cache.gates[1]) = f;
        rows(cache.gates[2]) = g;
        rows(cache.gates[3]) = o;
        rows(cache.c) = c;
        rows(cache.c_act) = c.array().tanh().matrix();
        rows(cache.h) = o.cwiseProduct(cache.c_act.middleRows(t * B, B));
        c_prev = std::move(c);
        break;
      }
      case CellKind::gru: {
        Matrix az = proj[0].middleRows(t * B, B);
        Matrix ar = proj[1].middleRows(t * B, B);
        az.noalias() += h_prev * p.w_rec[0].transpose();
        ar.noalias() += h_prev * p.w_rec[1].transpose();
        const Matrix z = sigmoid(az);
        const Matrix r = sigmoid(ar);
        Matrix ah = proj[2].middleRows(t * B, B);
        ah.noalias() += r.cwiseProduct(h_prev) * p.w_rec[2].transpose();
        const Matrix hh = ah.array().tanh().matrix();
        rows(cache.gates[0]) = z;
        rows(cache.gates[1]) = r;
        rows(cache.gates[2]) = hh;
        // h = z*h_prev + (1-z)*hh
        rows(cache.h) = z.cwiseProduct(h_prev) +
                        (1.0 - z.array()).matrix().cwiseProduct(hh);
        break;
      }
    }
    h_prev = cache.h.middleRows(t * B, B);
  }
  if (!cache.h.allFinite()) {
    throw NonFiniteActivation(cell_name(p.kind) + " produced non-finite hidden state");
  }
}

void cell_backward(const CellParams& p, const SeqBatch& x, const CellCache& cache,
                   const Matrix& dh_out, CellParams& grads, Matrix* dx) {
  const int T = x.steps;
  const int B = x.batch;
  const int H = p.units;
  const int G = cell_gates(p.kind);
  const bool rev = cache.reverse;

  // Pre-activation gradients per gate, collected for the batched input-side
  // products after the time loop.
  std::vector<Matrix> da(G, Matrix::Zero(T * B, H));

  Matrix dh_carry = Matrix::Zero(B, H);
  Matrix dc_carry = Matrix::Zero(B, H);

  const auto order = [&](int s) { return rev ? T - 1 - s : s; };

  for (int s = T - 1; s >= 0; --s) {
    const int t = order(s);
    const auto at = [&](const Matrix& m) { return m.middleRows(t * B, B); };
    // State fed into step s of the processing order.
    const bool first = (s == 0);
    const int t_prev = first ? -1 : order(s - 1);
    const Matrix h_prev = first ? Matrix::Zero(B, H)
                                : Matrix(cache.h.middleRows(t_prev * B, B));

    Matrix dh = dh_out.middleRows(t * B, B) + dh_carry;

    switch (p.kind) {
      case CellKind::rnn: {
        const Matrix h = at(cache.h);
        const Matrix da_t = ((1.0 - h.array().square()) * dh.array()).matrix();
        da[0].middleRows(t * B, B) = da_t;
        grads.w_rec[0].noalias() += da_t.transpose() * h_prev;
        dh_carry.noalias() = da_t * p.w_rec[0];
        break;
      }
      case CellKind::lstm: {
        const Matrix i = at(cache.gates[0]);
        const Matrix f = at(cache.gates[1]);
        const Matrix g = at(cache.gates[2]);
        const Matrix o = at(cache.gates[3]);
        const Matrix tc = at(cache.c_act);
        const Matrix c_prev =
            first ? Matrix::Zero(B, H) : Matrix(cache.c.middleRows(t_prev * B, B));

        const Matrix do_ = dh.cwiseProduct(tc);
        Matrix dc = (dh.array() * o.array() * (1.0 - tc.array().square())).matrix();
        dc += dc_carry;
        const Matrix di = dc.cwiseProduct(g);
        const Matrix dg = dc.cwiseProduct(i);
        const Matrix df = dc.cwiseProduct(c_prev);
        dc_carry = dc.cwiseProduct(f);

        const Matrix da_i = (di.array() * i.array() * (1.0 - i.array())).matrix();
        const Matrix da_f = (df.array() * f.array() * (1.0 - f.array())).matrix();
        const Matrix da_g = (dg.array() * (1.0 - g.array().square())).matrix();
        const Matrix da_o = (do_.array() * o.array() * (1.0 - o.array())).matrix();
        da[0].middleRows(t * B, B) = da_i;
        da[1].middleRows(t * B, B) = da_f;
        da[2].middleRows(t * B, B) = da_g;
        da[3].middleRows(t * B, B) = da_o;

        grads.w_rec[0].noalias() += da_i.transpose() * h_prev;
        grads.w_rec[1].noalias() += da_f.transpose() * h_prev;
        grads.w_rec[2].noalias() += da_g.transpose() * h_prev;
        grads.w_rec[3].noalias() += da_o.transpose() * h_prev;

        dh_carry.noalias() = da_i * p.w_rec[0];
        dh_carry.noalias() += da_f * p.w_rec[1];
        dh_carry.noalias() += da_g * p.w_rec[2];
        dh_carry.noalias() += da_o * p.w_rec[3];
        break;
      }
      case CellKind::gru: {
        const Matrix z = at(cache.gates[0]);
        const Matrix r = at(cache.gates[1]);
        const Matrix hh = at(cache.gates[2]);

        const Matrix dz = dh.cwiseProduct(h_prev - hh);
        const Matrix dhh = (dh.array() * (1.0 - z.array())).matrix();
        Matrix dh_prev = dh.cwiseProduct(z);

        const Matrix da_h = (dhh.array() * (1.0 - hh.array().square())).matrix();
        grads.w_rec[2].noalias() += da_h.transpose() * r.cwiseProduct(h_prev);
        const Matrix drh = da_h * p.w_rec[2];
        const Matrix dr = drh.cwiseProduct(h_prev);
        dh_prev += drh.cwiseProduct(r);

        const Matrix da_z = (dz.array() * z.array() * (1.0 - z.array())).matrix();
        const Matrix da_r = (dr.array() * r.array() * (1.0 - r.array())).matrix();
        da[0].middleRows(t * B, B) = da_z;
        da[1].middleRows(t * B, B) = da_r;
        da[2].middleRows(t * B, B) = da_h;

        grads.w_rec[0].noalias() += da_z.transpose() * h_prev;
        grads.w_rec[1].noalias() += da_r.transpose() * h_prev;

        dh_prev.noalias() += da_z * p.w_rec[0];
        dh_prev.noalias() += da_r * p.w_rec[1];
        dh_carry = std::move(dh_prev);
        break;
      }
    }
  }

  for (int g = 0; g < G; ++g) {
    grads.w_in[g].noalias() += da[g].transpose() * x.data;
    grads.bias[g] += da[g].colwise().sum().transpose();
    if (dx != nullptr) dx->noalias() += da[g] * p.w_in[g];
  }
}

DenseParams::DenseParams(int input, int units, Activation act)
    : input(input), units(units), act(act), w(Matrix::Zero(units, input)),
      b(Vector::Zero(units)) {}

void DenseParams::init_glorot(std::mt19937_64& rng) {
  glorot_fill(w, rng);
  b.setZero();
}

Matrix dense_forward(const DenseParams& p, const Matrix& x, DenseCache* cache) {
  if (x.cols() != p.input) {
    throw ShapeMismatch("dense expects " + std::to_string(p.input) + " inputs, got " +
                        std::to_string(x.cols()));
  }
  Matrix z = x * p.w.transpose();
  z.rowwise() += p.b.transpose();
  Matrix y = apply_activation(p.act, z);
  if (cache != nullptr) {
    cache->x = x;
    cache->y = y;
  }
  return y;
}

Matrix dense_backward(const DenseParams& p, const DenseCache& cache, const Matrix& dy,
                      DenseParams& grads) {
  const Matrix dz = activation_backward(p.act, cache.y, dy);
  grads.w.noalias() += dz.transpose() * cache.x;
  grads.b += dz.colwise().sum().transpose();
  return dz * p.w;
}

Matrix dropout_forward(double rate, const Matrix& x, std::mt19937_64& rng,
                       DropoutCache* cache) {
  if (rate <= 0.0) {
    if (cache != nullptr) cache->mask = Matrix::Constant(x.rows(), x.cols(), 1.0);
    return x;
  }
  const double scale = 1.0 / (1.0 - rate);
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix mask(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      mask(r, c) = keep(rng) ? scale : 0.0;
    }
  }
  Matrix out = x.cwiseProduct(mask);
  if (cache != nullptr) cache->mask = std::move(mask);
  return out;
}

Matrix dropout_backward(const DropoutCache& cache, const Matrix& dy) {
  return dy.cwiseProduct(cache.mask);
}

}  // namespace rulkit::nn
