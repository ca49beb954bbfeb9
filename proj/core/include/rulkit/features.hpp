#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "rulkit/fleet.hpp"
#include "rulkit/labels.hpp"

namespace rulkit {

/// Sensor indices (0-based, s1 == 0) whose per-column standard deviation over
/// the training fleet exceeds min_std. Near-constant channels carry no signal
/// and would collapse to a point under min-max scaling. Throws AllConstant
/// when nothing passes.
std::vector<int> select_features(const FleetData& train, double min_std = 0.01);

std::string sensor_name(int sensor_index);

/// Column-wise min/max fitted on training rows only, plus mean/std used by
/// the explainer's sampling distribution.
struct NormStats {
  std::vector<std::string> names;
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  Eigen::Index size() const { return min.size(); }
};

NormStats fit_minmax(const Eigen::MatrixXd& train, std::vector<std::string> names);

/// (x - min) / (max - min) per column. Constant columns map to 0. Values are
/// deliberately not clamped, so out-of-range test inputs land outside [0,1].
Eigen::MatrixXd apply_minmax(const Eigen::MatrixXd& x, const NormStats& stats);

/// Inverse of apply_minmax on non-constant columns.
Eigen::MatrixXd invert_minmax(const Eigen::MatrixXd& x, const NormStats& stats);

/// Per-cycle rows of one fleet with labels attached, ordered by
/// (unit, cycle). Feature columns are the selected sensors followed by the
/// raw cycle index ("cycle_norm" once normalized).
struct Dataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd x;  // rows x features
  std::vector<int> unit;
  std::vector<int> cycle;
  std::vector<int> rul;    // clipped
  std::vector<int> label;  // 0/1

  struct Span {
    int unit_id;
    int begin;
    int len;
  };
  std::vector<Span> spans;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
};

Dataset build_dataset(const FleetData& fleet, const RulSeries& rul,
                      const LabelConfig& cfg, const std::vector<int>& sensors);

/// Windowed view over a Dataset. Windows are contiguous row slices of the
/// backing matrix; window k of a unit covers its cycles k..k+L-1 and takes
/// the label of the final cycle.
struct SequenceTensor {
  int window_len = 0;
  int num_features = 0;
  std::shared_ptr<const Eigen::MatrixXd> source;
  std::vector<int> start;  // backing-row index of each window's first cycle
  std::vector<int> label;
  std::vector<int> unit;
  std::vector<int> end_cycle;

  std::size_t size() const { return start.size(); }
  /// Materialized (L x F) copy of window k.
  Eigen::MatrixXd window(std::size_t k) const;
};

/// All sliding windows of length window_len; a unit with n cycles yields
/// max(0, n - L + 1) windows.
SequenceTensor make_windows(const Dataset& ds, int window_len);

struct LastWindows {
  SequenceTensor tensor;          // one window per unit long enough to fill it
  std::vector<int> skipped_units; // units shorter than the window
};

/// The final window_len cycles of each unit (evaluation convention).
LastWindows make_last_windows(const Dataset& ds, int window_len);

}  // namespace rulkit
