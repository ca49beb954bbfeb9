#include "rulkit/ml/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rulkit/error.hpp"

namespace rulkit::ml {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();  // lower is better
  int n_left = 0;
};

struct Builder {
  const Eigen::MatrixXd& x;
  const std::vector<double>& y;
  const TreeConfig& cfg;
  std::mt19937_64& rng;
  std::vector<TreeNode> nodes;
  std::vector<std::pair<double, double>> scratch;  // (value, target)

  // Weighted gini of the two halves of `scratch` split after position k
  // is evaluated incrementally by scanning prefix label counts.
  Split best_split_classification(const std::vector<int>& idx, int feature) {
    scratch.clear();
    for (int i : idx) scratch.emplace_back(x(i, feature), y[i]);
    std::sort(scratch.begin(), scratch.end());
    const int n = static_cast<int>(scratch.size());
    double total_pos = 0.0;
    for (auto& [v, t] : scratch) total_pos += t;

    Split best;
    best.feature = feature;
    double left_pos = 0.0;
    for (int k = 0; k < n - 1; ++k) {
      left_pos += scratch[k].second;
      if (scratch[k].first == scratch[k + 1].first) continue;
      const double nl = k + 1;
      const double nr = n - nl;
      const double pl = left_pos / nl;
      const double pr = (total_pos - left_pos) / nr;
      const double gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl);
      const double gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr);
      const double score = (nl * gini_l + nr * gini_r) / static_cast<double>(n);
      if (score < best.score) {
        best.score = score;
        best.threshold = scratch[k].first + (scratch[k + 1].first - scratch[k].first) / 2.0;
        best.n_left = static_cast<int>(nl);
      }
    }
    return best;
  }

  Split best_split_regression(const std::vector<int>& idx, int feature) {
    scratch.clear();
    for (int i : idx) scratch.emplace_back(x(i, feature), y[i]);
    std::sort(scratch.begin(), scratch.end());
    const int n = static_cast<int>(scratch.size());
    double total_sum = 0.0;
    for (auto& [v, t] : scratch) total_sum += t;

    Split best;
    best.feature = feature;
    double left_sum = 0.0;
    for (int k = 0; k < n - 1; ++k) {
      left_sum += scratch[k].second;
      if (scratch[k].first == scratch[k + 1].first) continue;
      const double nl = k + 1;
      const double nr = n - nl;
      const double right_sum = total_sum - left_sum;
      // Minimizing SSE == maximizing sum of (sum^2 / count) over children.
      const double score = -(left_sum * left_sum / nl + right_sum * right_sum / nr);
      if (score < best.score) {
        best.score = score;
        best.threshold = scratch[k].first + (scratch[k + 1].first - scratch[k].first) / 2.0;
        best.n_left = static_cast<int>(nl);
      }
    }
    return best;
  }

  Split find_split(const std::vector<int>& idx) {
    const int d = static_cast<int>(x.cols());
    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng);
    const int budget = cfg.max_features > 0 ? std::min(cfg.max_features, d) : d;

    Split best;
    int considered = 0;
    // Walk the shuffled features; features with no valid threshold do not
    // use up the budget, so constant columns never starve the search.
    for (int f : features) {
      if (considered >= budget && best.feature >= 0 &&
          best.score < std::numeric_limits<double>::infinity()) {
        break;
      }
      const Split s = cfg.regression ? best_split_regression(idx, f)
                                     : best_split_classification(idx, f);
      if (s.score < std::numeric_limits<double>::infinity()) {
        ++considered;
        if (s.score < best.score) best = s;
      }
    }
    return best;
  }

  int make_leaf(const std::vector<int>& idx) {
    TreeNode leaf;
    if (cfg.regression) {
      double sum = 0.0;
      for (int i : idx) sum += y[i];
      leaf.value1 = sum / static_cast<double>(idx.size());
    } else {
      double pos = 0.0;
      for (int i : idx) pos += y[i];
      leaf.value1 = pos / static_cast<double>(idx.size());
      leaf.value0 = 1.0 - leaf.value1;
    }
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  }

  bool is_pure(const std::vector<int>& idx) const {
    for (std::size_t i = 1; i < idx.size(); ++i) {
      if (y[idx[i]] != y[idx[0]]) return false;
    }
    return true;
  }

  int build(std::vector<int> idx, int depth) {
    if (static_cast<int>(idx.size()) < cfg.min_samples_split || is_pure(idx) ||
        (cfg.max_depth > 0 && depth >= cfg.max_depth)) {
      return make_leaf(idx);
    }
    const Split split = find_split(idx);
    if (split.feature < 0 || !std::isfinite(split.score)) {
      return make_leaf(idx);
    }
    std::vector<int> left, right;
    left.reserve(split.n_left);
    right.reserve(idx.size() - split.n_left);
    for (int i : idx) {
      (x(i, split.feature) <= split.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    const int me = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[me].feature = split.feature;
    nodes[me].threshold = split.threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    nodes[me].left = l;
    nodes[me].right = r;
    return me;
  }
};

}  // namespace

void DecisionTree::fit(const Eigen::MatrixXd& x, const std::vector<double>& y,
                       const std::vector<int>& sample_idx, const TreeConfig& cfg,
                       std::mt19937_64& rng) {
  if (sample_idx.empty()) throw rulkit::EmptyDataset("decision tree: no samples");
  if (y.size() != static_cast<std::size_t>(x.rows())) {
    throw rulkit::LengthMismatch("decision tree: target length mismatch");
  }
  Builder b{x, y, cfg, rng, {}, {}};
  b.build(sample_idx, 0);
  nodes_ = std::move(b.nodes);
}

int DecisionTree::apply(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    node = row(nodes_[node].feature) <= nodes_[node].threshold ? nodes_[node].left
                                                               : nodes_[node].right;
  }
  return node;
}

double DecisionTree::predict_value(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return nodes_[apply(row)].value1;
}

int DecisionTree::depth() const {
  // Preorder layout: depth via explicit walk.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[node].feature >= 0) {
      stack.push_back({nodes_[node].left, d + 1});
      stack.push_back({nodes_[node].right, d + 1});
    }
  }
  return best;
}

}  // namespace rulkit::ml
