#include "rulkit/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit {

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw LengthMismatch("confusion: " + std::to_string(y_true.size()) + " labels vs " +
                         std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] != 0;
    const bool p = y_pred[i] != 0;
    if (t && p)
      ++cm.tp;
    else if (!t && p)
      ++cm.fp;
    else if (t && !p)
      ++cm.fn;
    else
      ++cm.tn;
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm, std::string model_id) {
  MetricsReport r;
  r.model = std::move(model_id);
  r.n = cm.total();
  r.accuracy = r.n == 0 ? 0.0
                        : static_cast<double>(cm.tp + cm.tn) / static_cast<double>(r.n);
  if (cm.tp + cm.fp == 0) {
    r.precision_degenerate = true;
  } else {
    r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn == 0) {
    r.recall_degenerate = true;
  } else {
    r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (r.precision + r.recall == 0.0) {
    r.f1_degenerate = true;
  } else {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::vector<MetricsReport> compare(std::vector<MetricsReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const MetricsReport& a, const MetricsReport& b) {
                     if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
                     return a.model < b.model;
                   });
  return reports;
}

std::string metrics_csv(const std::vector<MetricsReport>& reports) {
  std::ostringstream out;
  out << "model,accuracy,precision,recall,f1,n\n";
  for (const MetricsReport& r : reports) {
    out << r.model << ',' << format_double(r.accuracy) << ',' << format_double(r.precision)
        << ',' << format_double(r.recall) << ',' << format_double(r.f1) << ',' << r.n
        << '\n';
  }
  return out.str();
}

std::string metrics_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %9s %10s %8s %8s %8s\n", "model", "accuracy",
                "precision", "recall", "f1", "n");
  out << buf;
  for (const MetricsReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-16s %9.4f %9.4f%s %8.4f %8.4f %8ld\n",
                  r.model.c_str(), r.accuracy, r.precision,
                  r.precision_degenerate ? "*" : " ", r.recall, r.f1, r.n);
    out << buf;
  }
  bool any_flag = false;
  for (const MetricsReport& r : reports) {
    any_flag = any_flag || r.precision_degenerate || r.recall_degenerate || r.f1_degenerate;
  }
  if (any_flag) out << "(* degenerate denominator, reported as 0)\n";
  return out.str();
}

}  // namespace rulkit
