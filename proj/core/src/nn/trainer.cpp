#include "rulkit/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit::nn {

namespace {
constexpr double kProbEps = 1e-7;

double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}
}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error("batch_size must be >= 1");
  if (epochs < 1) throw Error("epochs must be >= 1");
  if (adam.learning_rate <= 0.0) throw Error("learning_rate must be > 0");
  if (validation_split <= 0.0 || validation_split >= 1.0) {
    throw Error("validation_split must lie in (0,1)");
  }
  if (patience < 1) throw Error("patience must be >= 1");
}

double bce_loss(double p, int y) {
  const double pc = clamp_prob(p);
  return y != 0 ? -std::log(pc) : -std::log(1.0 - pc);
}

double bce_mean(const Vector& p, std::span<const int> y) {
  if (static_cast<std::size_t>(p.size()) != y.size()) {
    throw LengthMismatch("bce_mean: probability/label length mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) sum += bce_loss(p(i), y[i]);
  return sum / static_cast<double>(p.size());
}

std::string history_csv(const History& h) {
  std::ostringstream out;
  out << "epoch,train_loss,val_loss,train_acc,val_acc\n";
  for (std::size_t e = 0; e < h.epochs.size(); ++e) {
    const EpochStats& s = h.epochs[e];
    out << (e + 1) << ',' << format_double(s.train_loss) << ','
        << format_double(s.val_loss) << ',' << format_double(s.train_acc) << ','
        << format_double(s.val_acc) << '\n';
  }
  return out.str();
}

SeqBatch gather(const SequenceTensor& data, std::span<const int> idx) {
  const int L = data.window_len;
  const int B = static_cast<int>(idx.size());
  const int F = data.num_features;
  SeqBatch batch;
  batch.steps = L;
  batch.batch = B;
  batch.data.resize(L * B, F);
  const Eigen::MatrixXd& src = *data.source;
  for (int b = 0; b < B; ++b) {
    const int start = data.start[idx[b]];
    for (int t = 0; t < L; ++t) {
      batch.data.row(t * B + b) = src.row(start + t);
    }
  }
  return batch;
}

namespace {

struct SplitEval {
  double loss = 0.0;
  double acc = 0.0;
};

SplitEval evaluate_split(const Network& net, const SequenceTensor& data,
                         std::span<const int> idx, double threshold, int chunk) {
  SplitEval out;
  if (idx.empty()) return out;
  double loss_sum = 0.0;
  long correct = 0;
  for (std::size_t off = 0; off < idx.size(); off += chunk) {
    const std::size_t n = std::min<std::size_t>(chunk, idx.size() - off);
    const SeqBatch batch = gather(data, idx.subspan(off, n));
    const Vector p = net.predict(batch);
    for (std::size_t i = 0; i < n; ++i) {
      const int y = data.label[idx[off + i]];
      loss_sum += bce_loss(p(static_cast<Eigen::Index>(i)), y);
      const int pred = p(static_cast<Eigen::Index>(i)) > threshold ? 1 : 0;
      correct += pred == y ? 1 : 0;
    }
  }
  out.loss = loss_sum / static_cast<double>(idx.size());
  out.acc = static_cast<double>(correct) / static_cast<double>(idx.size());
  return out;
}

// d(mean BCE)/d(output); the head output is the positive-class probability
// (sigmoid column or softmax column 1). Matches the clamped loss.
Matrix loss_gradient(const Matrix& output, std::span<const int> y) {
  Matrix d = Matrix::Zero(output.rows(), output.cols());
  const double inv_n = 1.0 / static_cast<double>(output.rows());
  const Eigen::Index col = output.cols() == 1 ? 0 : 1;
  for (Eigen::Index i = 0; i < output.rows(); ++i) {
    const double pc = clamp_prob(output(i, col));
    const double target = y[static_cast<std::size_t>(i)] != 0 ? 1.0 : 0.0;
    d(i, col) = inv_n * (pc - target) / (pc * (1.0 - pc));
  }
  return d;
}

}  // namespace

FitResult fit(const NetworkSpec& spec, const SequenceTensor& data, const TrainConfig& cfg) {
  cfg.validate();
  spec.validate();
  if (data.size() == 0) throw EmptyDataset("fit: no training windows");

  Network net(spec);
  net.init_weights(cfg.seed);

  // Deterministic RNG schedule: one shuffle for the validation split, then
  // per-epoch batch shuffles and dropout draws from the same stream.
  std::mt19937_64 rng(cfg.seed);

  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = 0;
  if (data.size() >= 2) {
    n_val = static_cast<std::size_t>(
        std::llround(cfg.validation_split * static_cast<double>(data.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, data.size() - 1);
  }
  std::vector<int> train_idx(order.begin(), order.end() - n_val);
  std::vector<int> val_idx(order.end() - n_val, order.end());

  Adam opt(cfg.adam);
  History history;
  double best_val = std::numeric_limits<double>::infinity();
  Vector best_weights = net.save_flat();
  int wait = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);

    double loss_sum = 0.0;
    long correct = 0;
    for (std::size_t off = 0; off < train_idx.size();
         off += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t n =
          std::min<std::size_t>(cfg.batch_size, train_idx.size() - off);
      const std::span<const int> idx(train_idx.data() + off, n);
      const SeqBatch batch = gather(data, idx);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = data.label[idx[i]];

      Network::Forward fwd = net.forward(batch, Mode::train, &rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = fwd.prob(static_cast<Eigen::Index>(i));
        loss_sum += bce_loss(p, y[i]);
        correct += (p > cfg.threshold ? 1 : 0) == y[i] ? 1 : 0;
      }

      const Matrix d_out = loss_gradient(fwd.output, y);
      const Network grads = net.backward(fwd, d_out);
      opt.step(net.tensors(), grads.tensors());
    }

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(train_idx.size());
    stats.train_acc = static_cast<double>(correct) / static_cast<double>(train_idx.size());

    const bool has_val = !val_idx.empty();
    const SplitEval val =
        has_val ? evaluate_split(net, data, val_idx, cfg.threshold, 512)
                : SplitEval{stats.train_loss, stats.train_acc};
    stats.val_loss = val.loss;
    stats.val_acc = val.acc;
    history.epochs.push_back(stats);

    if (val.loss < best_val) {
      best_val = val.loss;
      best_weights = net.save_flat();
      history.best_epoch = epoch;
      wait = 0;
    } else {
      ++wait;
      if (wait >= cfg.patience) {
        history.stopped_early = true;
        break;
      }
    }
  }

  net.load_flat(best_weights);
  return FitResult{std::move(net), std::move(history)};
}

Vector predict_proba(const Network& net, const SequenceTensor& data, int chunk) {
  Vector out(static_cast<Eigen::Index>(data.size()));
  std::vector<int> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t off = 0; off < idx.size(); off += static_cast<std::size_t>(chunk)) {
    const std::size_t n = std::min<std::size_t>(chunk, idx.size() - off);
    const SeqBatch batch = gather(data, std::span<const int>(idx.data() + off, n));
    const Vector p = net.predict(batch);
    out.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(n)) = p;
  }
  return out;
}

}  // namespace rulkit::nn
