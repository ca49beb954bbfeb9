#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rulkit/nn/activations.hpp"

namespace rulkit::nn {

enum class CellKind { rnn, lstm, gru };

std::string cell_name(CellKind k);
int cell_gates(CellKind k);

/// A minibatch of equal-length sequences, stored step-major: step t occupies
/// rows [t*batch, (t+1)*batch) of `data`.
struct SeqBatch {
  Matrix data;
  int steps = 0;
  int batch = 0;

  int dim() const { return static_cast<int>(data.cols()); }
  auto step(int t) { return data.middleRows(t * batch, batch); }
  auto step(int t) const { return data.middleRows(t * batch, batch); }
};

/// Weights for one recurrent cell. Gate order: rnn [h]; lstm [i f g o];
/// gru [z r h]. One bias per gate (no separate recurrent bias), so the
/// trainable count is gates * (units*(input+units) + units).
struct CellParams {
  CellKind kind = CellKind::rnn;
  int input = 0;
  int units = 0;
  std::vector<Matrix> w_in;   // gate -> units x input
  std::vector<Matrix> w_rec;  // gate -> units x units
  std::vector<Vector> bias;   // gate -> units

  CellParams() = default;
  CellParams(CellKind kind, int input, int units);

  void init_glorot(std::mt19937_64& rng);
  long param_count() const;
};

/// Per-step activations captured during a training-mode pass, aligned to the
/// original time index regardless of processing direction.
struct CellCache {
  bool reverse = false;
  Matrix h;                   // (steps*batch) x units
  Matrix c;                   // lstm only
  Matrix c_act;               // lstm only: tanh(c)
  std::vector<Matrix> gates;  // post-activation, per gate
};

/// Runs the cell over the batch. With reverse=true the sequence is processed
/// from the last step to the first (the backward half of a bidirectional
/// layer); outputs stay aligned to input time indices.
/// Writes hidden states for every step into cache.h.
void cell_forward(const CellParams& p, const SeqBatch& x, bool reverse, CellCache& cache);

/// Backpropagation through time. dh_out is the loss gradient w.r.t. every
/// step's hidden output ((steps*batch) x units). Accumulates into `grads`
/// (shape-congruent with `p`) and into dx when non-null.
void cell_backward(const CellParams& p, const SeqBatch& x, const CellCache& cache,
                   const Matrix& dh_out, CellParams& grads, Matrix* dx);

struct DenseParams {
  int input = 0;
  int units = 0;
  Activation act = Activation::identity;
  Matrix w;  // units x input
  Vector b;

  DenseParams() = default;
  DenseParams(int input, int units, Activation act);

  void init_glorot(std::mt19937_64& rng);
  long param_count() const { return static_cast<long>(units) * input + units; }
};

struct DenseCache {
  Matrix x;  // layer input
  Matrix y;  // post-activation output
};

Matrix dense_forward(const DenseParams& p, const Matrix& x, DenseCache* cache);
/// Returns dX; accumulates weight gradients into `grads`.
Matrix dense_backward(const DenseParams& p, const DenseCache& cache, const Matrix& dy,
                      DenseParams& grads);

/// Inverted dropout: scale kept units by 1/(1-rate) at train time so
/// inference is a plain identity.
struct DropoutCache {
  Matrix mask;  // 0 or 1/(1-rate), same shape as the input
};

Matrix dropout_forward(double rate, const Matrix& x, std::mt19937_64& rng,
                       DropoutCache* cache);
Matrix dropout_backward(const DropoutCache& cache, const Matrix& dy);

}  // namespace rulkit::nn
