#pragma once

#include <cstdint>
#include <string>

#include "rulkit/labels.hpp"

namespace rulkit {

/// Flat experiment configuration. Loads from key=value text, accepts CLI
/// overrides, and serializes canonically so a run can be fingerprinted; the
/// FNV-1a hash of that canonical form is embedded in every output file.
struct RunConfig {
  // data / pipeline
  std::string data_dir = "data";
  std::string subset = "FD001";
  std::string split = "holdout";  // holdout | native
  std::string out_dir = "out";
  std::string model = "gru";
  int window = 50;
  int w1 = 30;
  int maxlife = 130;
  double holdout_frac = 0.2;
  double var_threshold = 0.01;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = library default

  // training overrides; negative values select the model family's default
  int epochs = -1;
  int batch = -1;
  double lr = -1.0;
  double dropout = -1.0;
  double val_split = -1.0;
  int patience = 3;

  // classic-model settings
  int n_trees = 100;
  int rf_max_depth = 0;  // 0 = unlimited
  int knn_k = 3;
  int gbm_estimators = 20;
  double gbm_lr = 0.5;
  int gbm_max_depth = 2;
  int gbm_max_features = 2;

  // recurrent stack shapes
  std::string gru_layers = "100";  // comma-separated unit counts

  // explanation settings
  int lime_samples = 5000;
  double lime_ridge = 1e-3;
  int lime_topk = 10;
  double kernel_width = -1.0;  // <=0: 0.75*sqrt(d)

  static RunConfig from_file(const std::string& path);

  /// Throws UsageError on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);

  void validate() const;
  LabelConfig label_config() const { return LabelConfig{maxlife, w1}; }

  /// Sorted key=value lines; the canonical form behind hash().
  std::string canonical() const;
  std::string hash() const;
};

}  // namespace rulkit
