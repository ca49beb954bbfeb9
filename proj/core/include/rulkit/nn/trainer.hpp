#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rulkit/features.hpp"
#include "rulkit/nn/adam.hpp"
#include "rulkit/nn/network.hpp"

namespace rulkit::nn {

struct TrainConfig {
  int batch_size = 64;
  int epochs = 15;
  AdamConfig adam;                 // lr 0.001, betas (0.9, 0.999), eps 1e-8
  double validation_split = 0.1;   // fraction of windows held out for early stopping
  int patience = 3;                // epochs without val-loss improvement before stopping
  std::uint64_t seed = 42;
  double threshold = 0.5;          // positive class when p > threshold

  void validate() const;
};

/// Binary cross-entropy with the probability clamped to [1e-7, 1-1e-7].
double bce_loss(double p, int y);
double bce_mean(const Vector& p, std::span<const int> y);

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
};

struct History {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;        // 1-based; epoch whose weights were kept
  bool stopped_early = false;
};

/// CSV with header "epoch,train_loss,val_loss,train_acc,val_acc".
std::string history_csv(const History& h);

struct FitResult {
  Network net;
  History history;
};

/// Trains by BPTT + Adam with a validation split and early stopping; the
/// best-validation weights are restored before returning. Deterministic for
/// a fixed seed.
FitResult fit(const NetworkSpec& spec, const SequenceTensor& data, const TrainConfig& cfg);

/// Copies the chosen windows into a step-major batch.
SeqBatch gather(const SequenceTensor& data, std::span<const int> idx);

/// Positive-class probabilities over every window (infer mode, chunked).
Vector predict_proba(const Network& net, const SequenceTensor& data, int chunk = 256);

}  // namespace rulkit::nn
