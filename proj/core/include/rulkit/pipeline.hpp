#pragma once

#include <string>
#include <vector>

#include "rulkit/classifier.hpp"
#include "rulkit/features.hpp"
#include "rulkit/lime.hpp"
#include "rulkit/metrics.hpp"
#include "rulkit/nn/trainer.hpp"
#include "rulkit/runconfig.hpp"

namespace rulkit {

/// In-memory form of the artifacts `prepare` writes.
struct PreparedData {
  Dataset train;
  Dataset eval;
  NormStats stats;  // raw-value stats of the selected features (train only)
  std::string split;
  std::string subset;
  int window = 50;
  int w1 = 30;
  int maxlife = 130;
  std::vector<int> skipped_eval_units;  // native split: test units shorter than window
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct PrepareSummary {
  std::string out_dir;
  int features = 0;
  long rows_train = 0;
  long rows_eval = 0;
  long windows_train = 0;
  long windows_eval = 0;
  std::vector<int> skipped_eval_units;
};

/// Reads raw CMAPSS-format files from cfg.data_dir, labels and normalizes
/// them, and writes train_labeled.csv, eval_labeled.csv, norm_stats.txt and
/// manifest.txt into cfg.out_dir.
PrepareSummary cmd_prepare(const RunConfig& cfg);

struct TrainSummary {
  std::string checkpoint_path;
  std::string history_path;  // empty for row-model families
  long param_count = 0;      // sequence families
  int epochs_run = 0;
  int best_epoch = 0;
  bool stopped_early = false;
};

/// Trains cfg.model on the prepared artifacts in cfg.data_dir; writes
/// checkpoint.txt (and history.csv for sequence models) into cfg.out_dir.
TrainSummary cmd_train(const RunConfig& cfg);

/// Evaluates a checkpoint against the prepared eval split; writes
/// metrics.csv into cfg.out_dir. Native split scores one decision per test
/// unit (last window / last cycle row); holdout scores every window/row of
/// the held-out units.
MetricsReport cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint_path);

struct ExplainSummary {
  std::string text_path;
  std::string record_path;
  lime::Explanation explanation;
};

/// Explains one eval-set row of a row-model checkpoint.
/// explained_class -1 selects the model's predicted class.
ExplainSummary cmd_explain(const RunConfig& cfg, const std::string& checkpoint_path,
                           int sample, int explained_class);

/// Collects every metrics.csv under cfg.data_dir, sorts by accuracy and
/// writes comparison.csv into cfg.out_dir.
std::vector<MetricsReport> cmd_compare(const RunConfig& cfg);

// -- building blocks shared with tests and tools ----------------------------

/// Default architecture for a sequence family (dropout < 0 picks the
/// family default).
nn::NetworkSpec default_network_spec(ModelFamily family, int input_features, int window,
                                     double dropout, const std::string& gru_layers);

nn::TrainConfig default_train_config(ModelFamily family, const RunConfig& cfg);

PreparedData load_prepared(const std::string& dir);

void write_dataset_csv(const Dataset& ds, const std::string& path,
                       const std::string& header_comment);
Dataset read_dataset_csv(const std::string& path);

void write_stats_file(const NormStats& stats, const std::string& path,
                      const std::string& header_comment);
NormStats read_stats_file(const std::string& path);

/// Applies cfg.threads to the numeric backends.
void configure_threads(int threads);

}  // namespace rulkit
