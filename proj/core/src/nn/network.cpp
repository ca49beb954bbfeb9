#include "rulkit/nn/network.hpp"

#include <sstream>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit::nn {

namespace {

const char* kGateNames[3][4] = {
    {"h", nullptr, nullptr, nullptr},  // rnn
    {"i", "f", "g", "o"},              // lstm
    {"z", "r", "h", nullptr},          // gru
};

const char* gate_name(CellKind k, int g) {
  switch (k) {
    case CellKind::rnn: return kGateNames[0][g];
    case CellKind::lstm: return kGateNames[1][g];
    case CellKind::gru: return kGateNames[2][g];
  }
  return "?";
}

long cell_param_formula(CellKind kind, int input, int units) {
  const long h = units, in = input;
  return cell_gates(kind) * (h * (in + h) + h);
}

}  // namespace

void NetworkSpec::validate() const {
  if (input_features < 1) throw ShapeMismatch("input_features must be >= 1");
  if (seq_len < 1) throw ShapeMismatch("seq_len must be >= 1");
  if (layers.empty()) throw ShapeMismatch("network needs at least one layer");

  int last_rec = -1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (std::holds_alternative<RecurrentSpec>(layers[i])) last_rec = static_cast<int>(i);
  }
  if (last_rec < 0) throw ShapeMismatch("network needs at least one recurrent layer");

  bool rows_stage = false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (const auto* r = std::get_if<RecurrentSpec>(&layers[i])) {
      if (r->units < 1) throw ShapeMismatch("recurrent units must be >= 1");
      if (rows_stage) {
        throw ShapeMismatch("recurrent layer after the sequence output was reduced");
      }
      if (static_cast<int>(i) == last_rec) rows_stage = true;
    } else if (const auto* d = std::get_if<DropoutSpec>(&layers[i])) {
      if (d->rate < 0.0 || d->rate >= 1.0) {
        throw Error("dropout rate must lie in [0,1)");
      }
    } else {
      const auto& dn = std::get<DenseSpec>(layers[i]);
      if (dn.units < 1) throw ShapeMismatch("dense units must be >= 1");
      if (!rows_stage) {
        throw ShapeMismatch("dense layer before the last recurrent layer");
      }
    }
  }
  const int out = output_units();
  if (out != 1 && out != 2) {
    throw ShapeMismatch("classifier head must have 1 (sigmoid) or 2 (softmax) units");
  }
}

std::string NetworkSpec::describe() const {
  std::ostringstream out;
  bool first = true;
  for (const LayerSpec& l : layers) {
    if (!first) out << ' ';
    first = false;
    if (const auto* r = std::get_if<RecurrentSpec>(&l)) {
      out << (r->bidirectional ? "bi" : "") << cell_name(r->cell) << ':' << r->units;
    } else if (const auto* d = std::get_if<DropoutSpec>(&l)) {
      out << "dropout:" << format_double(d->rate);
    } else {
      const auto& dn = std::get<DenseSpec>(l);
      out << "dense:" << dn.units << ':' << activation_name(dn.act);
    }
  }
  return out.str();
}

NetworkSpec NetworkSpec::parse(int input_features, int seq_len, const std::string& text) {
  NetworkSpec spec;
  spec.input_features = input_features;
  spec.seq_len = seq_len;
  for (std::string_view tok : split_ws(text)) {
    auto parts = split_char(tok, ':');
    const std::string head(parts[0]);
    if (head == "dropout") {
      if (parts.size() != 2) throw Error("bad dropout spec: " + std::string(tok));
      auto rate = parse_double(parts[1]);
      if (!rate) throw Error("bad dropout rate: " + std::string(tok));
      spec.layers.push_back(DropoutSpec{*rate});
    } else if (head == "dense") {
      if (parts.size() != 3) throw Error("bad dense spec: " + std::string(tok));
      auto units = parse_int(parts[1]);
      if (!units) throw Error("bad dense units: " + std::string(tok));
      spec.layers.push_back(
          DenseSpec{static_cast<int>(*units), activation_from_name(std::string(parts[2]))});
    } else {
      bool bidi = head.starts_with("bi");
      const std::string cell = bidi ? head.substr(2) : head;
      CellKind kind;
      if (cell == "rnn")
        kind = CellKind::rnn;
      else if (cell == "lstm")
        kind = CellKind::lstm;
      else if (cell == "gru")
        kind = CellKind::gru;
      else
        throw Error("unknown layer: " + std::string(tok));
      if (parts.size() != 2) throw Error("bad recurrent spec: " + std::string(tok));
      auto units = parse_int(parts[1]);
      if (!units) throw Error("bad recurrent units: " + std::string(tok));
      spec.layers.push_back(RecurrentSpec{kind, static_cast<int>(*units), bidi});
    }
  }
  spec.validate();
  return spec;
}

int NetworkSpec::output_units() const {
  int dim = input_features;
  for (const LayerSpec& l : layers) {
    if (const auto* r = std::get_if<RecurrentSpec>(&l)) {
      dim = r->units * (r->bidirectional ? 2 : 1);
    } else if (const auto* d = std::get_if<DenseSpec>(&l)) {
      dim = d->units;
    }
  }
  return dim;
}

long count_params(const NetworkSpec& spec) {
  long total = 0;
  int dim = spec.input_features;
  for (const LayerSpec& l : spec.layers) {
    if (const auto* r = std::get_if<RecurrentSpec>(&l)) {
      const int mult = r->bidirectional ? 2 : 1;
      total += mult * cell_param_formula(r->cell, dim, r->units);
      dim = r->units * mult;
    } else if (const auto* d = std::get_if<DenseSpec>(&l)) {
      total += static_cast<long>(d->units) * dim + d->units;
      dim = d->units;
    }
  }
  return total;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  int dim = spec_.input_features;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const LayerSpec& l = spec_.layers[i];
    if (const auto* r = std::get_if<RecurrentSpec>(&l)) {
      RecurrentLayer layer;
      layer.spec = *r;
      layer.fw = CellParams(r->cell, dim, r->units);
      if (r->bidirectional) layer.bw = CellParams(r->cell, dim, r->units);
      layers_.push_back(std::move(layer));
      dim = r->units * (r->bidirectional ? 2 : 1);
      last_recurrent_ = static_cast<int>(i);
    } else if (const auto* d = std::get_if<DropoutSpec>(&l)) {
      layers_.push_back(DropoutLayer{d->rate});
    } else {
      const auto& dn = std::get<DenseSpec>(l);
      layers_.push_back(DenseLayer{DenseParams(dim, dn.units, dn.act)});
      dim = dn.units;
    }
  }
}

void Network::init_weights(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (Layer& l : layers_) {
    if (auto* r = std::get_if<RecurrentLayer>(&l)) {
      r->fw.init_glorot(rng);
      if (r->spec.bidirectional) r->bw.init_glorot(rng);
    } else if (auto* d = std::get_if<DenseLayer>(&l)) {
      d->p.init_glorot(rng);
    }
  }
}

long Network::param_count() const {
  long n = 0;
  for (const TensorRef& t : tensors()) n += t.size;
  return n;
}

namespace {

void cell_tensors(const std::string& prefix, CellParams& p, std::vector<TensorRef>& out) {
  const int g = cell_gates(p.kind);
  for (int i = 0; i < g; ++i) {
    out.push_back({prefix + ".w_in." + gate_name(p.kind, i), p.w_in[i].data(),
                   p.w_in[i].rows(), p.w_in[i].cols(), p.w_in[i].size()});
  }
  for (int i = 0; i < g; ++i) {
    out.push_back({prefix + ".w_rec." + gate_name(p.kind, i), p.w_rec[i].data(),
                   p.w_rec[i].rows(), p.w_rec[i].cols(), p.w_rec[i].size()});
  }
  for (int i = 0; i < g; ++i) {
    out.push_back({prefix + ".b." + gate_name(p.kind, i), p.bias[i].data(),
                   p.bias[i].size(), 1, p.bias[i].size()});
  }
}

}  // namespace

std::vector<TensorRef> Network::tensors() {
  std::vector<TensorRef> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "l" + std::to_string(i);
    if (auto* r = std::get_if<RecurrentLayer>(&layers_[i])) {
      const std::string base = prefix + "." + cell_name(r->spec.cell);
      if (r->spec.bidirectional) {
        cell_tensors(base + ".fw", r->fw, out);
        cell_tensors(base + ".bw", r->bw, out);
      } else {
        cell_tensors(base, r->fw, out);
      }
    } else if (auto* d = std::get_if<DenseLayer>(&layers_[i])) {
      out.push_back({prefix + ".dense.w", d->p.w.data(), d->p.w.rows(), d->p.w.cols(),
                     d->p.w.size()});
      out.push_back({prefix + ".dense.b", d->p.b.data(), d->p.b.size(), 1,
                     d->p.b.size()});
    }
  }
  return out;
}

std::vector<TensorRef> Network::tensors() const {
  return const_cast<Network*>(this)->tensors();
}

Vector head_probability(const Matrix& output) {
  if (output.cols() == 1) return output.col(0);
  return output.col(1);
}

// -- forward / backward ------------------------------------------------------

struct NetworkCache {
  struct Rec {
    SeqBatch input;
    CellCache fw;
    CellCache bw;
  };
  struct Drop {
    DropoutCache c;
    bool seq_stage = false;
  };
  struct Dense {
    DenseCache c;
  };
  using Entry = std::variant<std::monostate, Rec, Drop, Dense>;
  std::vector<Entry> entries;
  int batch = 0;
};

Network::Forward::Forward() = default;
Network::Forward::Forward(Forward&&) noexcept = default;
Network::Forward& Network::Forward::operator=(Forward&&) noexcept = default;
Network::Forward::~Forward() = default;

Network::Forward Network::forward(const SeqBatch& x, Mode mode,
                                  std::mt19937_64* rng) const {
  if (x.dim() != spec_.input_features) {
    throw ShapeMismatch("network expects " + std::to_string(spec_.input_features) +
                        " features, got " + std::to_string(x.dim()));
  }
  if (x.steps != spec_.seq_len) {
    throw ShapeMismatch("network expects sequence length " +
                        std::to_string(spec_.seq_len) + ", got " +
                        std::to_string(x.steps));
  }
  const bool training = mode == Mode::train;

  Forward result;
  std::unique_ptr<NetworkCache> cache;
  if (training) {
    cache = std::make_unique<NetworkCache>();
    cache->entries.resize(layers_.size());
    cache->batch = x.batch;
  }

  SeqBatch seq = x;
  Matrix rows;
  bool rows_stage = false;

  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (const auto* r = std::get_if<RecurrentLayer>(&l)) {
      NetworkCache::Rec local;
      NetworkCache::Rec* rec = training ? &local : nullptr;
      CellCache tmp_fw, tmp_bw;
      CellCache& cfw = rec ? rec->fw : tmp_fw;
      CellCache& cbw = rec ? rec->bw : tmp_bw;

      cell_forward(r->fw, seq, false, cfw);
      Matrix out;
      if (r->spec.bidirectional) {
        cell_forward(r->bw, seq, true, cbw);
        out.resize(seq.steps * seq.batch, 2 * r->spec.units);
        out.leftCols(r->spec.units) = cfw.h;
        out.rightCols(r->spec.units) = cbw.h;
      } else {
        out = cfw.h;
      }

      if (static_cast<int>(i) == last_recurrent_) {
        // Reduce to the final step: forward state at t = T-1; for the
        // reversed half its final state sits at t = 0.
        const int T = seq.steps, B = seq.batch, H = r->spec.units;
        if (r->spec.bidirectional) {
          rows.resize(B, 2 * H);
          rows.leftCols(H) = cfw.h.middleRows((T - 1) * B, B);
          rows.rightCols(H) = cbw.h.middleRows(0, B);
        } else {
          rows = cfw.h.middleRows((T - 1) * B, B);
        }
        rows_stage = true;
      }
      if (training) {
        local.input = std::move(seq);
        cache->entries[i] = std::move(local);
      }
      if (!rows_stage) {
        seq = SeqBatch{std::move(out), x.steps, x.batch};
      }
    } else if (const auto* d = std::get_if<DropoutLayer>(&l)) {
      Matrix& target = rows_stage ? rows : seq.data;
      if (training) {
        if (d->rate > 0.0 && rng == nullptr) {
          throw Error("dropout in train mode needs an RNG");
        }
        NetworkCache::Drop drop;
        drop.seq_stage = !rows_stage;
        static std::mt19937_64 unused_rng;  // rate 0 path never draws
        target = dropout_forward(d->rate, target, rng ? *rng : unused_rng, &drop.c);
        cache->entries[i] = std::move(drop);
      }
      // infer mode: no-op
    } else {
      const auto& dn = std::get<DenseLayer>(l);
      NetworkCache::Dense dense;
      rows = dense_forward(dn.p, rows, training ? &dense.c : nullptr);
      if (training) cache->entries[i] = std::move(dense);
    }
  }

  if (!rows.allFinite()) throw NonFiniteActivation("network output is not finite");
  result.output = std::move(rows);
  result.prob = head_probability(result.output);
  result.cache = std::move(cache);
  return result;
}

Network Network::backward(const Forward& fwd, const Matrix& d_output) const {
  if (fwd.cache == nullptr) {
    throw Error("backward requires caches from a train-mode forward pass");
  }
  const NetworkCache& cache = *fwd.cache;
  const int B = cache.batch;

  Network grads(spec_);  // zero-initialized, same structure

  Matrix d_rows = d_output;
  Matrix d_seq;  // gradient w.r.t. a full sequence output, once in seq stage
  bool rows_stage = true;

  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    const Layer& l = layers_[i];
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      const auto& c = std::get<NetworkCache::Dense>(cache.entries[i]);
      auto& g = std::get<DenseLayer>(grads.layers_[i]);
      d_rows = dense_backward(d->p, c.c, d_rows, g.p);
    } else if (std::holds_alternative<DropoutLayer>(l)) {
      const auto& c = std::get<NetworkCache::Drop>(cache.entries[i]);
      if (c.seq_stage) {
        d_seq = dropout_backward(c.c, d_seq);
      } else {
        d_rows = dropout_backward(c.c, d_rows);
      }
    } else {
      const auto& r = std::get<RecurrentLayer>(l);
      const auto& c = std::get<NetworkCache::Rec>(cache.entries[i]);
      auto& g = std::get<RecurrentLayer>(grads.layers_[i]);
      const int T = c.input.steps;
      const int H = r.spec.units;

      // Assemble dh over all steps for this layer's output.
      Matrix dh_fw = Matrix::Zero(T * B, H);
      Matrix dh_bw;
      if (r.spec.bidirectional) dh_bw = Matrix::Zero(T * B, H);

      if (i == last_recurrent_) {
        if (r.spec.bidirectional) {
          dh_fw.middleRows((T - 1) * B, B) = d_rows.leftCols(H);
          dh_bw.middleRows(0, B) = d_rows.rightCols(H);
        } else {
          dh_fw.middleRows((T - 1) * B, B) = d_rows;
        }
      } else {
        if (r.spec.bidirectional) {
          dh_fw = d_seq.leftCols(H);
          dh_bw = d_seq.rightCols(H);
        } else {
          dh_fw = d_seq;
        }
      }

      Matrix dx = Matrix::Zero(T * B, c.input.dim());
      cell_backward(r.fw, c.input, c.fw, dh_fw, g.fw, &dx);
      if (r.spec.bidirectional) {
        cell_backward(r.bw, c.input, c.bw, dh_bw, g.bw, &dx);
      }
      d_seq = std::move(dx);
      rows_stage = false;
    }
  }
  (void)rows_stage;

  for (const TensorRef& t : grads.tensors()) {
    for (Eigen::Index k = 0; k < t.size; ++k) {
      if (!std::isfinite(t.data[k])) {
        throw NonFiniteGradient("non-finite gradient in " + t.name);
      }
    }
  }
  return grads;
}

Vector Network::predict(const SeqBatch& x) const {
  return forward(x, Mode::infer).prob;
}

Vector Network::save_flat() const {
  const auto refs = tensors();
  long total = 0;
  for (const auto& t : refs) total += t.size;
  Vector flat(total);
  long off = 0;
  for (const auto& t : refs) {
    flat.segment(off, t.size) = Eigen::Map<const Vector>(t.data, t.size);
    off += t.size;
  }
  return flat;
}

void Network::load_flat(const Vector& flat) {
  const auto refs = tensors();
  long off = 0;
  for (const auto& t : refs) {
    Eigen::Map<Vector>(t.data, t.size) = flat.segment(off, t.size);
    off += t.size;
  }
  if (off != flat.size()) throw ShapeMismatch("flat weight vector size mismatch");
}

}  // namespace rulkit::nn
