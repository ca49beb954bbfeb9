#include "rulkit/pipeline.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rulkit/checkpoint.hpp"
#include "rulkit/error.hpp"
#include "rulkit/parse.hpp"
#include "rulkit/text.hpp"

namespace fs = std::filesystem;

namespace rulkit {

void configure_threads(int threads) {
  if (threads <= 0) return;
  Eigen::setNbThreads(threads);
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

// -- dataset / stats artifacts ----------------------------------------------

void write_dataset_csv(const Dataset& ds, const std::string& path,
                       const std::string& header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset: " + path);
  out << "# " << header_comment << '\n';
  out << "unit,cycle";
  for (const std::string& n : ds.feature_names) out << ',' << n;
  out << ",rul,label1\n";
  for (Eigen::Index r = 0; r < ds.rows(); ++r) {
    out << ds.unit[r] << ',' << ds.cycle[r];
    for (Eigen::Index c = 0; c < ds.cols(); ++c) out << ',' << format_double(ds.x(r, c));
    out << ',' << ds.rul[r] << ',' << ds.label[r] << '\n';
  }
  if (!out) throw Error("dataset write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path);
  std::string line;
  long line_no = 0;

  // header (skipping comments)
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    for (auto t : split_char(trim(line), ',')) header.emplace_back(t);
    break;
  }
  if (header.size() < 5 || header[0] != "unit" || header[1] != "cycle" ||
      header[header.size() - 2] != "rul" || header.back() != "label1") {
    throw Error(path + ": unexpected dataset header");
  }
  Dataset ds;
  ds.feature_names.assign(header.begin() + 2, header.end() - 2);
  const std::size_t n_feat = ds.feature_names.size();

  std::vector<std::array<int, 4>> meta;  // unit, cycle, rul, label
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto toks = split_char(body, ',');
    if (toks.size() != n_feat + 4) {
      throw Error(path + ":" + std::to_string(line_no) + ": wrong column count");
    }
    const auto geti = [&](std::string_view t) {
      auto v = parse_int(t);
      if (!v) throw Error(path + ":" + std::to_string(line_no) + ": bad integer");
      return static_cast<int>(*v);
    };
    meta.push_back({geti(toks[0]), geti(toks[1]), geti(toks[toks.size() - 2]),
                    geti(toks.back())});
    for (std::size_t j = 0; j < n_feat; ++j) {
      auto v = parse_double(toks[2 + j]);
      if (!v) throw Error(path + ":" + std::to_string(line_no) + ": bad number");
      values.push_back(*v);
    }
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(meta.size());
  ds.x.resize(rows, static_cast<Eigen::Index>(n_feat));
  for (Eigen::Index r = 0; r < rows; ++r) {
    ds.unit.push_back(meta[r][0]);
    ds.cycle.push_back(meta[r][1]);
    ds.rul.push_back(meta[r][2]);
    ds.label.push_back(meta[r][3]);
    for (std::size_t j = 0; j < n_feat; ++j) {
      ds.x(r, static_cast<Eigen::Index>(j)) = values[r * n_feat + j];
    }
  }
  // rebuild unit spans from consecutive runs
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (ds.spans.empty() || ds.spans.back().unit_id != ds.unit[r]) {
      ds.spans.push_back({ds.unit[r], static_cast<int>(r), 0});
    }
    ds.spans.back().len += 1;
  }
  return ds;
}

void write_stats_file(const NormStats& stats, const std::string& path,
                      const std::string& header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write stats: " + path);
  out << "# " << header_comment << '\n';
  out << "features " << stats.size() << '\n';
  for (Eigen::Index j = 0; j < stats.size(); ++j) {
    out << "feature " << j << ' ' << stats.names[j] << ' ' << format_double(stats.min(j))
        << ' ' << format_double(stats.max(j)) << ' ' << format_double(stats.mean(j))
        << ' ' << format_double(stats.stddev(j)) << '\n';
  }
}

NormStats read_stats_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stats: " + path);
  std::string line;
  NormStats stats;
  Eigen::Index count = -1, seen = 0;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto toks = split_ws(body);
    if (toks[0] == "features") {
      count = *parse_int(toks.at(1));
      stats.min.resize(count);
      stats.max.resize(count);
      stats.mean.resize(count);
      stats.stddev.resize(count);
    } else if (toks[0] == "feature") {
      const Eigen::Index j = *parse_int(toks.at(1));
      stats.names.emplace_back(toks.at(2));
      stats.min(j) = *parse_double(toks.at(3));
      stats.max(j) = *parse_double(toks.at(4));
      stats.mean(j) = *parse_double(toks.at(5));
      stats.stddev(j) = *parse_double(toks.at(6));
      ++seen;
    } else {
      throw Error(path + ": unexpected line '" + std::string(body) + "'");
    }
  }
  if (count < 0 || seen != count) throw Error(path + ": truncated stats file");
  return stats;
}

// -- manifest ----------------------------------------------------------------

namespace {

std::string provenance(const RunConfig& cfg) {
  return "config_hash=" + cfg.hash() + " seed=" + std::to_string(cfg.seed);
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto sp = body.find(' ');
    if (sp == std::string_view::npos) {
      kv.emplace(std::string(body), "");
    } else {
      kv.emplace(std::string(body.substr(0, sp)), std::string(trim(body.substr(sp + 1))));
    }
  }
  return kv;
}

struct SplitFleets {
  FleetData train;
  FleetData eval;
  RulTable eval_truth;  // final RUL per eval unit
};

SplitFleets split_native(FleetData train, FleetData test, RulTable truth) {
  SplitFleets out;
  out.train = std::move(train);
  out.eval = std::move(test);
  out.eval_truth = std::move(truth);
  return out;
}

SplitFleets split_holdout(const FleetData& full, double frac, std::uint64_t seed) {
  std::vector<int> ids = full.unit_ids();
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::size_t n_eval = static_cast<std::size_t>(
      std::llround(frac * static_cast<double>(ids.size())));
  n_eval = std::clamp<std::size_t>(n_eval, 1, ids.size() - 1);

  SplitFleets out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int id = ids[i];
    std::vector<EngineCycle> rows = full.unit(id);
    if (i < ids.size() - n_eval) {
      out.train.add_unit(id, std::move(rows));
    } else {
      out.eval.add_unit(id, std::move(rows));
      out.eval_truth[id] = 0;  // held-out units ran to failure
    }
  }
  return out;
}

std::string dataset_header(const RunConfig& cfg, const std::string& role) {
  return "rulkit-dataset " + provenance(cfg) + " subset=" + cfg.subset +
         " split=" + cfg.split + " role=" + role;
}

}  // namespace

PrepareSummary cmd_prepare(const RunConfig& cfg) {
  cfg.validate();
  configure_threads(cfg.threads);
  const std::string train_path = cfg.data_dir + "/train_" + cfg.subset + ".txt";
  if (!fs::exists(train_path)) {
    throw Error("missing input file: " + train_path);
  }
  FleetData raw_train = load_cycles_file(train_path);

  SplitFleets fleets;
  if (cfg.split == "native") {
    const std::string test_path = cfg.data_dir + "/test_" + cfg.subset + ".txt";
    const std::string rul_path = cfg.data_dir + "/RUL_" + cfg.subset + ".txt";
    if (!fs::exists(test_path)) throw Error("missing input file: " + test_path);
    if (!fs::exists(rul_path)) throw Error("missing input file: " + rul_path);
    fleets = split_native(std::move(raw_train), load_cycles_file(test_path),
                          load_rul_file(rul_path));
  } else {
    fleets = split_holdout(raw_train, cfg.holdout_frac, cfg.seed);
  }

  const std::vector<int> sensors = select_features(fleets.train, cfg.var_threshold);
  const LabelConfig label_cfg = cfg.label_config();

  Dataset train_ds =
      build_dataset(fleets.train, compute_train_rul(fleets.train), label_cfg, sensors);
  Dataset eval_ds = build_dataset(
      fleets.eval, compute_test_rul(fleets.eval, fleets.eval_truth), label_cfg, sensors);

  const NormStats stats = fit_minmax(train_ds.x, train_ds.feature_names);
  train_ds.x = apply_minmax(train_ds.x, stats);
  eval_ds.x = apply_minmax(eval_ds.x, stats);

  const SequenceTensor train_windows = make_windows(train_ds, cfg.window);
  long windows_eval = 0;
  std::vector<int> skipped;
  if (cfg.split == "native") {
    const LastWindows lw = make_last_windows(eval_ds, cfg.window);
    windows_eval = static_cast<long>(lw.tensor.size());
    skipped = lw.skipped_units;
  } else {
    windows_eval = static_cast<long>(make_windows(eval_ds, cfg.window).size());
    for (const auto& span : eval_ds.spans) {
      if (span.len < cfg.window) skipped.push_back(span.unit_id);
    }
  }

  fs::create_directories(cfg.out_dir);
  write_dataset_csv(train_ds, cfg.out_dir + "/train_labeled.csv",
                    dataset_header(cfg, "train"));
  write_dataset_csv(eval_ds, cfg.out_dir + "/eval_labeled.csv",
                    dataset_header(cfg, "eval"));
  write_stats_file(stats, cfg.out_dir + "/norm_stats.txt",
                   "rulkit-stats " + provenance(cfg));

  std::ostringstream manifest;
  manifest << "# rulkit-manifest\n";
  manifest << "config_hash " << cfg.hash() << '\n';
  manifest << "seed " << cfg.seed << '\n';
  manifest << "subset " << cfg.subset << '\n';
  manifest << "split " << cfg.split << '\n';
  manifest << "window " << cfg.window << '\n';
  manifest << "w1 " << cfg.w1 << '\n';
  manifest << "maxlife " << cfg.maxlife << '\n';
  manifest << "features " << train_ds.feature_names.size() << '\n';
  manifest << "feature_names";
  for (const auto& n : train_ds.feature_names) manifest << ' ' << n;
  manifest << '\n';
  manifest << "units_train " << fleets.train.unit_count() << '\n';
  manifest << "units_eval " << fleets.eval.unit_count() << '\n';
  manifest << "rows_train " << train_ds.rows() << '\n';
  manifest << "rows_eval " << eval_ds.rows() << '\n';
  manifest << "windows_train " << train_windows.size() << '\n';
  manifest << "windows_eval " << windows_eval << '\n';
  manifest << "skipped_eval_units";
  for (int id : skipped) manifest << ' ' << id;
  manifest << '\n';
  write_file(cfg.out_dir + "/manifest.txt", manifest.str());

  PrepareSummary s;
  s.out_dir = cfg.out_dir;
  s.features = static_cast<int>(train_ds.feature_names.size());
  s.rows_train = train_ds.rows();
  s.rows_eval = eval_ds.rows();
  s.windows_train = static_cast<long>(train_windows.size());
  s.windows_eval = windows_eval;
  s.skipped_eval_units = std::move(skipped);
  return s;
}

PreparedData load_prepared(const std::string& dir) {
  PreparedData p;
  p.train = read_dataset_csv(dir + "/train_labeled.csv");
  p.eval = read_dataset_csv(dir + "/eval_labeled.csv");
  p.stats = read_stats_file(dir + "/norm_stats.txt");
  const auto m = read_manifest(dir + "/manifest.txt");
  const auto need = [&](const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw Error(dir + "/manifest.txt: missing key " + key);
    return it->second;
  };
  p.split = need("split");
  p.subset = need("subset");
  p.window = static_cast<int>(*parse_int(need("window")));
  p.w1 = static_cast<int>(*parse_int(need("w1")));
  p.maxlife = static_cast<int>(*parse_int(need("maxlife")));
  p.config_hash = need("config_hash");
  p.seed = static_cast<std::uint64_t>(*parse_int(need("seed")));
  if (auto it = m.find("skipped_eval_units"); it != m.end()) {
    for (auto tok : split_ws(it->second)) {
      p.skipped_eval_units.push_back(static_cast<int>(*parse_int(tok)));
    }
  }
  return p;
}

// -- model construction -------------------------------------------------------

nn::NetworkSpec default_network_spec(ModelFamily family, int input_features, int window,
                                     double dropout, const std::string& gru_layers) {
  nn::NetworkSpec spec;
  spec.input_features = input_features;
  spec.seq_len = window;
  using nn::Activation;
  using nn::CellKind;

  const auto add_dropout = [&](double rate) {
    if (rate > 0.0) spec.layers.push_back(nn::DropoutSpec{rate});
  };

  switch (family) {
    case ModelFamily::rnn:
    case ModelFamily::birnn: {
      const double rate = dropout < 0.0 ? 0.0 : dropout;
      spec.layers.push_back(
          nn::RecurrentSpec{CellKind::rnn, 16, family == ModelFamily::birnn});
      add_dropout(rate);
      spec.layers.push_back(nn::DenseSpec{8, Activation::relu});
      spec.layers.push_back(nn::DenseSpec{1, Activation::sigmoid});
      break;
    }
    case ModelFamily::lstm:
    case ModelFamily::bilstm: {
      const double rate = dropout < 0.0 ? 0.5 : dropout;
      const bool bidi = family == ModelFamily::bilstm;
      spec.layers.push_back(nn::RecurrentSpec{CellKind::lstm, 100, bidi});
      add_dropout(rate);
      spec.layers.push_back(nn::RecurrentSpec{CellKind::lstm, 50, bidi});
      add_dropout(rate);
      spec.layers.push_back(nn::DenseSpec{1, Activation::sigmoid});
      break;
    }
    case ModelFamily::gru: {
      const double rate = dropout < 0.0 ? 0.2 : dropout;
      for (auto tok : split_char(gru_layers, ',')) {
        auto units = parse_int(trim(tok));
        if (!units || *units < 1) {
          throw UsageError("bad gru_layers entry: '" + std::string(tok) + "'");
        }
        spec.layers.push_back(nn::RecurrentSpec{CellKind::gru,
                                                static_cast<int>(*units), false});
        add_dropout(rate);
      }
      spec.layers.push_back(nn::DenseSpec{1, Activation::sigmoid});
      break;
    }
    default:
      throw UsageError(family_name(family) + " is not a sequence family");
  }
  spec.validate();
  return spec;
}

nn::TrainConfig default_train_config(ModelFamily family, const RunConfig& cfg) {
  nn::TrainConfig tc;
  switch (family) {
    case ModelFamily::rnn:
    case ModelFamily::birnn:
      tc.batch_size = 64;
      tc.epochs = 15;
      tc.validation_split = 0.1;
      break;
    case ModelFamily::lstm:
    case ModelFamily::bilstm:
      tc.batch_size = 64;
      tc.epochs = 15;
      tc.validation_split = 0.2;
      break;
    case ModelFamily::gru:
      tc.batch_size = 200;
      tc.epochs = 20;
      tc.validation_split = 0.1;
      break;
    default:
      throw UsageError(family_name(family) + " is not a sequence family");
  }
  if (cfg.batch > 0) tc.batch_size = cfg.batch;
  if (cfg.epochs > 0) tc.epochs = cfg.epochs;
  if (cfg.lr > 0.0) tc.adam.learning_rate = cfg.lr;
  if (cfg.val_split > 0.0) tc.validation_split = cfg.val_split;
  tc.patience = cfg.patience;
  tc.seed = cfg.seed;
  return tc;
}

TrainSummary cmd_train(const RunConfig& cfg) {
  configure_threads(cfg.threads);
  const ModelFamily family = family_from_name(cfg.model);
  PreparedData prep = load_prepared(cfg.data_dir);

  // The prepared artifacts own the data-shaping parameters.
  RunConfig eff = cfg;
  eff.window = prep.window;
  eff.w1 = prep.w1;
  eff.maxlife = prep.maxlife;
  eff.split = prep.split;
  eff.subset = prep.subset;

  fs::create_directories(eff.out_dir);
  TrainedClassifier clf;
  clf.family = family;
  clf.feature_names = prep.train.feature_names;
  clf.seed = eff.seed;
  clf.config_hash = eff.hash();

  TrainSummary summary;

  if (is_sequence_family(family)) {
    const SequenceTensor windows = make_windows(prep.train, prep.window);
    const nn::NetworkSpec spec =
        default_network_spec(family, static_cast<int>(prep.train.feature_names.size()),
                             prep.window, eff.dropout, eff.gru_layers);
    const nn::TrainConfig tc = default_train_config(family, eff);
    nn::FitResult fit_result = nn::fit(spec, windows, tc);

    clf.window_len = prep.window;
    summary.param_count = fit_result.net.param_count();
    summary.epochs_run = static_cast<int>(fit_result.history.epochs.size());
    summary.best_epoch = fit_result.history.best_epoch;
    summary.stopped_early = fit_result.history.stopped_early;
    clf.model = std::move(fit_result.net);

    summary.history_path = eff.out_dir + "/history.csv";
    write_file(summary.history_path,
               "# rulkit-history " + provenance(eff) + "\n" +
                   nn::history_csv(fit_result.history));
  } else {
    const Eigen::MatrixXd& x = prep.train.x;
    const std::vector<int>& y = prep.train.label;
    switch (family) {
      case ModelFamily::rf: {
        ml::ForestConfig fc;
        fc.n_trees = eff.n_trees;
        fc.max_depth = eff.rf_max_depth;
        fc.seed = eff.seed;
        ml::RandomForest rf;
        rf.fit(x, y, fc);
        clf.model = std::move(rf);
        break;
      }
      case ModelFamily::knn: {
        ml::Knn knn;
        knn.fit(x, y, ml::KnnConfig{eff.knn_k});
        clf.model = std::move(knn);
        break;
      }
      case ModelFamily::nb: {
        ml::GaussianNb nb;
        nb.fit(x, y);
        clf.model = std::move(nb);
        break;
      }
      case ModelFamily::gbm: {
        ml::GbmConfig gc;
        gc.n_estimators = eff.gbm_estimators;
        gc.learning_rate = eff.gbm_lr;
        gc.max_depth = eff.gbm_max_depth;
        gc.max_features = eff.gbm_max_features;
        gc.seed = eff.seed;
        ml::GradientBoosting gbm;
        gbm.fit(x, y, gc);
        clf.model = std::move(gbm);
        break;
      }
      default:
        throw UsageError("unhandled family");
    }
  }

  summary.checkpoint_path = eff.out_dir + "/checkpoint.txt";
  save_checkpoint_file(clf, summary.checkpoint_path);
  return summary;
}

// -- evaluation ----------------------------------------------------------------

namespace {

/// Per-unit last rows of a dataset (native-split row-model evaluation).
std::pair<Eigen::MatrixXd, std::vector<int>> last_rows(const Dataset& ds) {
  Eigen::MatrixXd x(ds.spans.size(), ds.cols());
  std::vector<int> y;
  Eigen::Index r = 0;
  for (const auto& span : ds.spans) {
    const int last = span.begin + span.len - 1;
    x.row(r++) = ds.x.row(last);
    y.push_back(ds.label[last]);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

MetricsReport cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint_path) {
  configure_threads(cfg.threads);
  PreparedData prep = load_prepared(cfg.data_dir);
  TrainedClassifier clf = load_checkpoint_file(checkpoint_path);
  if (clf.feature_names != prep.train.feature_names) {
    throw ShapeMismatch("checkpoint features do not match the prepared dataset");
  }

  const bool native = prep.split == "native";
  Eigen::VectorXd prob;
  std::vector<int> truth;
  if (clf.is_sequence_model()) {
    if (clf.window_len != prep.window) {
      throw ShapeMismatch("checkpoint window length does not match prepared data");
    }
    SequenceTensor tensor;
    if (native) {
      tensor = make_last_windows(prep.eval, prep.window).tensor;
    } else {
      tensor = make_windows(prep.eval, prep.window);
    }
    if (tensor.size() == 0) throw EmptyDataset("no evaluable windows in eval split");
    prob = clf.predict_proba_windows(tensor);
    truth = tensor.label;
  } else {
    if (native) {
      auto [x, y] = last_rows(prep.eval);
      prob = clf.predict_proba_rows(x);
      truth = std::move(y);
    } else {
      prob = clf.predict_proba_rows(prep.eval.x);
      truth = prep.eval.label;
    }
  }

  std::vector<int> pred(truth.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred[i] = prob(static_cast<Eigen::Index>(i)) > 0.5 ? 1 : 0;
  }
  MetricsReport report = metrics(confusion(truth, pred), family_name(clf.family));

  fs::create_directories(cfg.out_dir);
  std::ostringstream out;
  out << "# rulkit-metrics config_hash=" << clf.config_hash << " seed=" << clf.seed
      << " split=" << prep.split << '\n';
  out << metrics_csv({report});
  write_file(cfg.out_dir + "/metrics.csv", out.str());
  return report;
}

// -- explanation ----------------------------------------------------------------

ExplainSummary cmd_explain(const RunConfig& cfg, const std::string& checkpoint_path,
                           int sample, int explained_class) {
  configure_threads(cfg.threads);
  PreparedData prep = load_prepared(cfg.data_dir);
  TrainedClassifier clf = load_checkpoint_file(checkpoint_path);
  if (clf.is_sequence_model()) {
    throw UsageError("sequence models (" + family_name(clf.family) +
                     ") expose no per-row surface and cannot be explained; "
                     "use a row family (rf, knn, nb, gbm)");
  }
  if (clf.feature_names != prep.train.feature_names) {
    throw ShapeMismatch("checkpoint features do not match the prepared dataset");
  }
  if (sample < 0 || sample >= prep.eval.rows()) {
    throw UsageError("sample index " + std::to_string(sample) + " out of range [0, " +
                     std::to_string(prep.eval.rows()) + ")");
  }

  const Eigen::RowVectorXd instance = prep.eval.x.row(sample);

  // Sampling spread: training std in the normalized space.
  const Eigen::Index d = prep.stats.size();
  Eigen::VectorXd feature_std(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double range = prep.stats.max(j) - prep.stats.min(j);
    feature_std(j) = range == 0.0 ? 0.0 : prep.stats.stddev(j) / range;
  }

  lime::ExplainConfig ec;
  ec.n_samples = cfg.lime_samples;
  ec.ridge = cfg.lime_ridge;
  ec.top_k = cfg.lime_topk;
  ec.kernel_width = cfg.kernel_width;
  ec.seed = cfg.seed;

  const lime::RowPredictor predictor = [&](const Eigen::MatrixXd& rows) {
    return clf.predict_proba_rows(rows);
  };

  int cls = explained_class;
  if (cls < 0) {
    Eigen::MatrixXd one = instance;
    cls = predictor(one)(0) > 0.5 ? 1 : 0;
  }

  const std::string id = prep.subset + "/eval#" + std::to_string(sample);
  lime::Explanation e = lime::explain_instance(predictor, instance,
                                               prep.train.feature_names, feature_std,
                                               cls, ec, id);

  fs::create_directories(cfg.out_dir);
  ExplainSummary summary;
  summary.text_path = cfg.out_dir + "/explanation_" + std::to_string(sample) + ".txt";
  summary.record_path = cfg.out_dir + "/explanation_" + std::to_string(sample) + ".json";
  write_file(summary.text_path, "# rulkit-explanation config_hash=" + clf.config_hash +
                                    " seed=" + std::to_string(ec.seed) + " model=" +
                                    family_name(clf.family) + "\n" +
                                    lime::render_report(e));
  write_file(summary.record_path, lime::to_record(e));
  summary.explanation = std::move(e);
  return summary;
}

// -- comparison ----------------------------------------------------------------

std::vector<MetricsReport> cmd_compare(const RunConfig& cfg) {
  std::vector<MetricsReport> reports;
  if (!fs::exists(cfg.data_dir)) throw Error("no such directory: " + cfg.data_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(cfg.data_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "metrics.csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::ifstream in(f);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
      const auto body = trim(line);
      if (body.empty() || body.front() == '#') continue;
      if (!seen_header) {
        seen_header = true;  // "model,accuracy,..."
        continue;
      }
      const auto toks = split_char(body, ',');
      if (toks.size() != 6) throw Error(f.string() + ": malformed metrics row");
      MetricsReport r;
      r.model = std::string(toks[0]);
      r.accuracy = *parse_double(toks[1]);
      r.precision = *parse_double(toks[2]);
      r.recall = *parse_double(toks[3]);
      r.f1 = *parse_double(toks[4]);
      r.n = *parse_int(toks[5]);
      reports.push_back(std::move(r));
    }
  }
  if (reports.empty()) throw Error("no metrics.csv files under " + cfg.data_dir);
  reports = compare(std::move(reports));

  fs::create_directories(cfg.out_dir);
  std::ostringstream out;
  out << "# rulkit-comparison config_hash=" << cfg.hash() << " seed=" << cfg.seed << '\n';
  out << metrics_csv(reports);
  write_file(cfg.out_dir + "/comparison.csv", out.str());
  return reports;
}

}  // namespace rulkit
