#include "rulkit/features.hpp"

#include <cmath>
#include <string>

#include "rulkit/error.hpp"

namespace rulkit {

std::vector<int> select_features(const FleetData& train, double min_std) {
  if (train.empty()) throw EmptyDataset("cannot select features from an empty fleet");
  const std::size_t n = train.row_count();
  std::array<double, kNumSensors> sum{}, sumsq{};
  for (int id : train.unit_ids()) {
    for (const EngineCycle& row : train.unit(id)) {
      for (int s = 0; s < kNumSensors; ++s) {
        sum[s] += row.sensors[s];
        sumsq[s] += row.sensors[s] * row.sensors[s];
      }
    }
  }
  std::vector<int> kept;
  for (int s = 0; s < kNumSensors; ++s) {
    const double mean = sum[s] / static_cast<double>(n);
    const double var = std::max(0.0, sumsq[s] / static_cast<double>(n) - mean * mean);
    if (std::sqrt(var) > min_std) kept.push_back(s);
  }
  if (kept.empty()) {
    throw AllConstant("all " + std::to_string(kNumSensors) + " sensors are constant");
  }
  return kept;
}

std::string sensor_name(int sensor_index) {
  return "s" + std::to_string(sensor_index + 1);
}

NormStats fit_minmax(const Eigen::MatrixXd& train, std::vector<std::string> names) {
  if (train.rows() < 1) throw EmptyDataset("fit_minmax needs at least one row");
  NormStats stats;
  stats.names = std::move(names);
  stats.min = train.colwise().minCoeff();
  stats.max = train.colwise().maxCoeff();
  stats.mean = train.colwise().mean();
  const Eigen::MatrixXd centered = train.rowwise() - stats.mean.transpose();
  stats.stddev =
      (centered.array().square().colwise().sum() / static_cast<double>(train.rows()))
          .sqrt()
          .matrix()
          .transpose();
  return stats;
}

Eigen::MatrixXd apply_minmax(const Eigen::MatrixXd& x, const NormStats& stats) {
  if (x.cols() != stats.size()) {
    throw ShapeMismatch("apply_minmax: " + std::to_string(x.cols()) + " columns vs " +
                        std::to_string(stats.size()) + " fitted features");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double range = stats.max(j) - stats.min(j);
    if (range == 0.0) {
      out.col(j).setZero();
    } else {
      out.col(j) = (x.col(j).array() - stats.min(j)) / range;
    }
  }
  return out;
}

Eigen::MatrixXd invert_minmax(const Eigen::MatrixXd& x, const NormStats& stats) {
  if (x.cols() != stats.size()) {
    throw ShapeMismatch("invert_minmax: column count mismatch");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double range = stats.max(j) - stats.min(j);
    out.col(j) = x.col(j).array() * range + stats.min(j);
  }
  return out;
}

Dataset build_dataset(const FleetData& fleet, const RulSeries& rul,
                      const LabelConfig& cfg, const std::vector<int>& sensors) {
  cfg.validate();
  Dataset ds;
  for (int s : sensors) ds.feature_names.push_back(sensor_name(s));
  ds.feature_names.push_back("cycle_norm");

  const Eigen::Index n_rows = static_cast<Eigen::Index>(fleet.row_count());
  const Eigen::Index n_cols = static_cast<Eigen::Index>(sensors.size()) + 1;
  ds.x.resize(n_rows, n_cols);
  ds.unit.reserve(n_rows);
  ds.cycle.reserve(n_rows);
  ds.rul.reserve(n_rows);
  ds.label.reserve(n_rows);

  Eigen::Index r = 0;
  for (int id : fleet.unit_ids()) {
    const auto& rows = fleet.unit(id);
    auto it = rul.find(id);
    if (it == rul.end()) {
      throw MissingRulEntry("unit " + std::to_string(id) + " has no RUL series");
    }
    ds.spans.push_back({id, static_cast<int>(r), static_cast<int>(rows.size())});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < sensors.size(); ++j) {
        ds.x(r, static_cast<Eigen::Index>(j)) = rows[i].sensors[sensors[j]];
      }
      ds.x(r, n_cols - 1) = static_cast<double>(rows[i].cycle);
      const int clipped = clip_rul(it->second[i], cfg);
      ds.unit.push_back(id);
      ds.cycle.push_back(rows[i].cycle);
      ds.rul.push_back(clipped);
      ds.label.push_back(binarize(clipped, cfg));
      ++r;
    }
  }
  return ds;
}

Eigen::MatrixXd SequenceTensor::window(std::size_t k) const {
  return source->middleRows(start[k], window_len);
}

namespace {

SequenceTensor empty_tensor(const Dataset& ds, int window_len) {
  SequenceTensor t;
  t.window_len = window_len;
  t.num_features = static_cast<int>(ds.cols());
  t.source = std::make_shared<const Eigen::MatrixXd>(ds.x);
  return t;
}

}  // namespace

SequenceTensor make_windows(const Dataset& ds, int window_len) {
  if (window_len < 1) throw Error("window length must be positive");
  SequenceTensor t = empty_tensor(ds, window_len);
  for (const Dataset::Span& span : ds.spans) {
    const int n_windows = span.len - window_len + 1;
    for (int k = 0; k < n_windows; ++k) {
      const int end_row = span.begin + k + window_len - 1;
      t.start.push_back(span.begin + k);
      t.label.push_back(ds.label[end_row]);
      t.unit.push_back(span.unit_id);
      t.end_cycle.push_back(ds.cycle[end_row]);
    }
  }
  return t;
}

LastWindows make_last_windows(const Dataset& ds, int window_len) {
  if (window_len < 1) throw Error("window length must be positive");
  LastWindows out;
  out.tensor = empty_tensor(ds, window_len);
  for (const Dataset::Span& span : ds.spans) {
    if (span.len < window_len) {
      out.skipped_units.push_back(span.unit_id);
      continue;
    }
    const int end_row = span.begin + span.len - 1;
    out.tensor.start.push_back(end_row - window_len + 1);
    out.tensor.label.push_back(ds.label[end_row]);
    out.tensor.unit.push_back(span.unit_id);
    out.tensor.end_cycle.push_back(ds.cycle[end_row]);
  }
  return out;
}

}  // namespace rulkit
