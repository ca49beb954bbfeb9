#include "rulkit/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rulkit/error.hpp"
#include "rulkit/text.hpp"

namespace rulkit {

namespace {

void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << "array " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_tensor(std::ostream& out, const nn::TensorRef& t) {
  out << "array " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
  for (Eigen::Index r = 0; r < t.rows; ++r) {
    for (Eigen::Index c = 0; c < t.cols; ++c) {
      if (c > 0) out << ' ';
      out << format_double(t.data[r + c * t.rows]);  // storage is column-major
    }
    out << '\n';
  }
}

void write_tree(std::ostream& out, int index, const ml::DecisionTree& tree) {
  out << "tree " << index << ' ' << tree.nodes().size() << '\n';
  for (const ml::TreeNode& n : tree.nodes()) {
    if (n.feature >= 0) {
      out << "n " << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left
          << ' ' << n.right << '\n';
    } else {
      out << "l " << format_double(n.value0) << ' ' << format_double(n.value1) << '\n';
    }
  }
}

struct Reader {
  std::istream& in;
  long line_no = 0;

  std::vector<std::string> next_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      auto toks = split_ws(line);
      if (toks.empty()) continue;
      std::vector<std::string> out;
      out.reserve(toks.size());
      for (auto t : toks) out.emplace_back(t);
      return out;
    }
    throw Error("checkpoint truncated at line " + std::to_string(line_no));
  }

  std::vector<std::string> expect(const std::string& keyword) {
    auto toks = next_line();
    if (toks[0] != keyword) {
      throw Error("checkpoint line " + std::to_string(line_no) + ": expected '" +
                  keyword + "', found '" + toks[0] + "'");
    }
    return toks;
  }

  double to_double(const std::string& tok) const {
    auto v = parse_double(tok);
    if (!v) {
      throw Error("checkpoint line " + std::to_string(line_no) + ": bad number '" +
                  tok + "'");
    }
    return *v;
  }

  long long to_int(const std::string& tok) const {
    auto v = parse_int(tok);
    if (!v) {
      throw Error("checkpoint line " + std::to_string(line_no) + ": bad integer '" +
                  tok + "'");
    }
    return *v;
  }

  Eigen::MatrixXd read_matrix(const std::string& expected_name) {
    auto head = expect("array");
    if (head.size() != 4 || head[1] != expected_name) {
      throw Error("checkpoint line " + std::to_string(line_no) + ": expected array " +
                  expected_name);
    }
    const auto rows = to_int(head[2]);
    const auto cols = to_int(head[3]);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      auto vals = next_line();
      if (vals.size() != static_cast<std::size_t>(cols)) {
        throw Error("checkpoint line " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols) + " values");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = to_double(vals[c]);
    }
    return m;
  }

  ml::DecisionTree read_tree(int expected_index) {
    auto head = expect("tree");
    if (head.size() != 3 || to_int(head[1]) != expected_index) {
      throw Error("checkpoint line " + std::to_string(line_no) + ": expected tree " +
                  std::to_string(expected_index));
    }
    const auto count = to_int(head[2]);
    ml::DecisionTree tree;
    tree.nodes().resize(count);
    for (long long i = 0; i < count; ++i) {
      auto toks = next_line();
      ml::TreeNode& n = tree.nodes()[i];
      if (toks[0] == "n" && toks.size() == 5) {
        n.feature = static_cast<int>(to_int(toks[1]));
        n.threshold = to_double(toks[2]);
        n.left = static_cast<int>(to_int(toks[3]));
        n.right = static_cast<int>(to_int(toks[4]));
      } else if (toks[0] == "l" && toks.size() == 3) {
        n.value0 = to_double(toks[1]);
        n.value1 = to_double(toks[2]);
      } else {
        throw Error("checkpoint line " + std::to_string(line_no) + ": bad tree node");
      }
    }
    return tree;
  }
};

}  // namespace

void save_checkpoint(const TrainedClassifier& clf, std::ostream& out) {
  out << "rulkit-checkpoint v1\n";
  out << "family " << family_name(clf.family) << '\n';
  out << "config_hash " << clf.config_hash << '\n';
  out << "seed " << clf.seed << '\n';
  out << "features " << clf.feature_names.size() << '\n';
  out << "feature_names";
  for (const std::string& n : clf.feature_names) out << ' ' << n;
  out << '\n';

  if (clf.is_sequence_model()) {
    const nn::Network& net = clf.network();
    out << "window " << clf.window_len << '\n';
    out << "spec " << net.spec().describe() << '\n';
    for (const nn::TensorRef& t : net.tensors()) write_tensor(out, t);
  } else if (const auto* rf = std::get_if<ml::RandomForest>(&clf.model)) {
    out << "forest " << rf->config().n_trees << ' ' << rf->config().max_depth << ' '
        << rf->config().max_features << ' ' << (rf->config().bootstrap ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < rf->trees().size(); ++i) {
      write_tree(out, static_cast<int>(i), rf->trees()[i]);
    }
  } else if (const auto* knn = std::get_if<ml::Knn>(&clf.model)) {
    out << "knn " << knn->config().k << '\n';
    write_matrix(out, "train_x", knn->train_x());
    out << "labels " << knn->train_y().size() << '\n';
    for (std::size_t i = 0; i < knn->train_y().size(); ++i) {
      if (i > 0) out << ' ';
      out << knn->train_y()[i];
    }
    out << '\n';
  } else if (const auto* nb = std::get_if<ml::GaussianNb>(&clf.model)) {
    out << "nb " << format_double(nb->prior(0)) << ' ' << format_double(nb->prior(1))
        << '\n';
    write_matrix(out, "mean", nb->means());
    write_matrix(out, "var", nb->variances());
  } else if (const auto* gbm = std::get_if<ml::GradientBoosting>(&clf.model)) {
    out << "gbm " << gbm->config().n_estimators << ' '
        << format_double(gbm->config().learning_rate) << ' ' << gbm->config().max_depth
        << ' ' << gbm->config().max_features << '\n';
    out << "init_score " << format_double(gbm->init_score()) << '\n';
    for (std::size_t i = 0; i < gbm->trees().size(); ++i) {
      write_tree(out, static_cast<int>(i), gbm->trees()[i]);
    }
  }
  out << "end\n";
}

void save_checkpoint_file(const TrainedClassifier& clf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path);
  save_checkpoint(clf, out);
  if (!out) throw Error("checkpoint write failed: " + path);
}

TrainedClassifier load_checkpoint(std::istream& in) {
  Reader r{in};
  auto magic = r.next_line();
  if (magic.size() != 2 || magic[0] != "rulkit-checkpoint" || magic[1] != "v1") {
    throw Error("not a rulkit checkpoint");
  }
  TrainedClassifier clf;
  clf.family = family_from_name(r.expect("family").at(1));
  clf.config_hash = r.expect("config_hash").at(1);
  clf.seed = static_cast<std::uint64_t>(r.to_int(r.expect("seed").at(1)));
  const auto n_features = r.to_int(r.expect("features").at(1));
  auto names = r.expect("feature_names");
  if (names.size() != static_cast<std::size_t>(n_features) + 1) {
    throw Error("checkpoint feature name count mismatch");
  }
  clf.feature_names.assign(names.begin() + 1, names.end());

  if (is_sequence_family(clf.family)) {
    clf.window_len = static_cast<int>(r.to_int(r.expect("window").at(1)));
    auto spec_toks = r.expect("spec");
    std::string spec_line;
    for (std::size_t i = 1; i < spec_toks.size(); ++i) {
      if (i > 1) spec_line += ' ';
      spec_line += spec_toks[i];
    }
    nn::Network net(nn::NetworkSpec::parse(static_cast<int>(n_features),
                                           clf.window_len, spec_line));
    for (nn::TensorRef& t : net.tensors()) {
      const Eigen::MatrixXd m = r.read_matrix(t.name);
      if (m.rows() != t.rows || m.cols() != t.cols) {
        throw Error("checkpoint array " + t.name + " has wrong shape");
      }
      for (Eigen::Index rr = 0; rr < t.rows; ++rr) {
        for (Eigen::Index cc = 0; cc < t.cols; ++cc) {
          t.data[rr + cc * t.rows] = m(rr, cc);
        }
      }
    }
    clf.model = std::move(net);
  } else if (clf.family == ModelFamily::rf) {
    auto head = r.expect("forest");
    ml::RandomForest rf;
    rf.config().n_trees = static_cast<int>(r.to_int(head.at(1)));
    rf.config().max_depth = static_cast<int>(r.to_int(head.at(2)));
    rf.config().max_features = static_cast<int>(r.to_int(head.at(3)));
    rf.config().bootstrap = r.to_int(head.at(4)) != 0;
    for (int i = 0; i < rf.config().n_trees; ++i) rf.trees().push_back(r.read_tree(i));
    clf.model = std::move(rf);
  } else if (clf.family == ModelFamily::knn) {
    auto head = r.expect("knn");
    ml::KnnConfig cfg;
    cfg.k = static_cast<int>(r.to_int(head.at(1)));
    Eigen::MatrixXd x = r.read_matrix("train_x");
    auto lab_head = r.expect("labels");
    const auto n = r.to_int(lab_head.at(1));
    auto labs = r.next_line();
    if (labs.size() != static_cast<std::size_t>(n)) {
      throw Error("checkpoint label count mismatch");
    }
    std::vector<int> y(n);
    for (long long i = 0; i < n; ++i) y[i] = static_cast<int>(r.to_int(labs[i]));
    ml::Knn knn;
    knn.fit(std::move(x), std::move(y), cfg);
    clf.model = std::move(knn);
  } else if (clf.family == ModelFamily::nb) {
    auto head = r.expect("nb");
    Eigen::Vector2d prior{r.to_double(head.at(1)), r.to_double(head.at(2))};
    Eigen::MatrixXd mean = r.read_matrix("mean");
    Eigen::MatrixXd var = r.read_matrix("var");
    ml::GaussianNb nb;
    nb.set_params(prior, std::move(mean), std::move(var));
    clf.model = std::move(nb);
  } else if (clf.family == ModelFamily::gbm) {
    auto head = r.expect("gbm");
    ml::GradientBoosting gbm;
    gbm.config().n_estimators = static_cast<int>(r.to_int(head.at(1)));
    gbm.config().learning_rate = r.to_double(head.at(2));
    gbm.config().max_depth = static_cast<int>(r.to_int(head.at(3)));
    gbm.config().max_features = static_cast<int>(r.to_int(head.at(4)));
    gbm.set_init_score(r.to_double(r.expect("init_score").at(1)));
    for (int i = 0; i < gbm.config().n_estimators; ++i) {
      gbm.trees().push_back(r.read_tree(i));
    }
    clf.model = std::move(gbm);
  }
  r.expect("end");
  return clf;
}

TrainedClassifier load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace rulkit
