#include "rulkit/runconfig.hpp"

#include <fstream>
#include <sstream>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit {

namespace {

long long to_int(const std::string& key, const std::string& value) {
  auto v = parse_int(value);
  if (!v) throw UsageError("config key '" + key + "': '" + value + "' is not an integer");
  return *v;
}

double to_double(const std::string& key, const std::string& value) {
  auto v = parse_double(value);
  if (!v) throw UsageError("config key '" + key + "': '" + value + "' is not a number");
  return *v;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    cfg.set(std::string(trim(body.substr(0, eq))),
            std::string(trim(body.substr(eq + 1))));
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "data_dir") data_dir = value;
  else if (key == "subset") subset = value;
  else if (key == "split") split = value;
  else if (key == "out_dir") out_dir = value;
  else if (key == "model") model = value;
  else if (key == "window") window = static_cast<int>(to_int(key, value));
  else if (key == "w1") w1 = static_cast<int>(to_int(key, value));
  else if (key == "maxlife") maxlife = static_cast<int>(to_int(key, value));
  else if (key == "holdout_frac") holdout_frac = to_double(key, value);
  else if (key == "var_threshold") var_threshold = to_double(key, value);
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "threads") threads = static_cast<int>(to_int(key, value));
  else if (key == "epochs") epochs = static_cast<int>(to_int(key, value));
  else if (key == "batch") batch = static_cast<int>(to_int(key, value));
  else if (key == "lr") lr = to_double(key, value);
  else if (key == "dropout") dropout = to_double(key, value);
  else if (key == "val_split") val_split = to_double(key, value);
  else if (key == "patience") patience = static_cast<int>(to_int(key, value));
  else if (key == "n_trees") n_trees = static_cast<int>(to_int(key, value));
  else if (key == "rf_max_depth") rf_max_depth = static_cast<int>(to_int(key, value));
  else if (key == "knn_k") knn_k = static_cast<int>(to_int(key, value));
  else if (key == "gbm_estimators") gbm_estimators = static_cast<int>(to_int(key, value));
  else if (key == "gbm_lr") gbm_lr = to_double(key, value);
  else if (key == "gbm_max_depth") gbm_max_depth = static_cast<int>(to_int(key, value));
  else if (key == "gbm_max_features") gbm_max_features = static_cast<int>(to_int(key, value));
  else if (key == "gru_layers") gru_layers = value;
  else if (key == "lime_samples") lime_samples = static_cast<int>(to_int(key, value));
  else if (key == "lime_ridge") lime_ridge = to_double(key, value);
  else if (key == "lime_topk") lime_topk = static_cast<int>(to_int(key, value));
  else if (key == "kernel_width") kernel_width = to_double(key, value);
  else throw UsageError("unknown config key: " + key);
}

void RunConfig::validate() const {
  if (split != "holdout" && split != "native") {
    throw UsageError("split must be 'holdout' or 'native', got '" + split + "'");
  }
  if (window < 1) throw UsageError("window must be >= 1");
  label_config().validate();
  if (holdout_frac <= 0.0 || holdout_frac >= 1.0) {
    throw UsageError("holdout_frac must lie in (0,1)");
  }
  if (var_threshold < 0.0) throw UsageError("var_threshold must be >= 0");
}

std::string RunConfig::canonical() const {
  // Keys in sorted order. data_dir/out_dir are deliberately left out: they
  // locate files, they do not parameterize the experiment, and the hash
  // should survive moving a run to a different directory.
  std::ostringstream out;
  out << "batch=" << batch << '\n'
      << "dropout=" << format_double(dropout) << '\n'
      << "epochs=" << epochs << '\n'
      << "gbm_estimators=" << gbm_estimators << '\n'
      << "gbm_lr=" << format_double(gbm_lr) << '\n'
      << "gbm_max_depth=" << gbm_max_depth << '\n'
      << "gbm_max_features=" << gbm_max_features << '\n'
      << "gru_layers=" << gru_layers << '\n'
      << "holdout_frac=" << format_double(holdout_frac) << '\n'
      << "kernel_width=" << format_double(kernel_width) << '\n'
      << "knn_k=" << knn_k << '\n'
      << "lime_ridge=" << format_double(lime_ridge) << '\n'
      << "lime_samples=" << lime_samples << '\n'
      << "lime_topk=" << lime_topk << '\n'
      << "lr=" << format_double(lr) << '\n'
      << "maxlife=" << maxlife << '\n'
      << "model=" << model << '\n'
      << "n_trees=" << n_trees << '\n'
      << "patience=" << patience << '\n'
      << "rf_max_depth=" << rf_max_depth << '\n'
      << "seed=" << seed << '\n'
      << "split=" << split << '\n'
      << "subset=" << subset << '\n'
      << "threads=" << threads << '\n'
      << "val_split=" << format_double(val_split) << '\n'
      << "var_threshold=" << format_double(var_threshold) << '\n'
      << "w1=" << w1 << '\n'
      << "window=" << window << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  return to_hex(fnv1a64(canonical()));
}

}  // namespace rulkit
