#pragma once

#include <string>
#include <vector>

namespace rulkit {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

/// Binary confusion counts; positive class is 1.
/// Throws LengthMismatch when the vectors differ in length.
ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct MetricsReport {
  std::string model;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long n = 0;
  // Degenerate denominators map to 0 instead of NaN; these flags mark it.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

MetricsReport metrics(const ConfusionMatrix& cm, std::string model_id = "");

/// Reports sorted by accuracy descending, ties broken by model id.
std::vector<MetricsReport> compare(std::vector<MetricsReport> reports);

/// CSV with header "model,accuracy,precision,recall,f1,n".
std::string metrics_csv(const std::vector<MetricsReport>& reports);

/// Column-aligned text table for terminals.
std::string metrics_table(const std::vector<MetricsReport>& reports);

}  // namespace rulkit
