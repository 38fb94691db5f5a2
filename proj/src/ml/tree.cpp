#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "doa/ml/ml.hpp"

namespace doa::ml {

namespace {

using Counts = std::map<std::string, std::size_t>;

double gini(const Counts& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

std::string majority(const Counts& counts) {
  // std::map iterates labels in lexicographic order, so the first maximum wins.
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [label, c] : counts) {
    if (c > best_count) {
      best = label;
      best_count = c;
    }
  }
  return best;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = -1.0;
};

Split best_split(std::span<const TreeSample> rows, const std::vector<std::size_t>& idx,
                 const Counts& parent) {
  const std::size_t n = idx.size();
  const double parent_gini = gini(parent, n);
  const std::size_t d = rows[idx.front()].features.size();
  Split best;
  std::vector<std::size_t> order = idx;
  for (std::size_t f = 0; f < d; ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].features[f] < rows[b].features[f];
    });
    Counts left;
    Counts right = parent;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const TreeSample& s = rows[order[i]];
      ++left[s.label];
      if (--right[s.label] == 0) right.erase(s.label);
      const double here = s.features[f];
      const double next = rows[order[i + 1]].features[f];
      if (!(here < next)) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      const double decrease = parent_gini -
                              (static_cast<double>(nl) / n) * gini(left, nl) -
                              (static_cast<double>(nr) / n) * gini(right, nr);
      if (decrease > best.decrease + 1e-12) {
        best = {static_cast<int>(f), here + (next - here) / 2.0, decrease};
      }
    }
  }
  return best;
}

}  // namespace

int TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::function<int(int)> walk = [&](int i) -> int {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(n.left), walk(n.right));
  };
  return walk(0);
}

TreeModel fit_tree(std::span<const TreeSample> rows, int max_depth) {
  if (rows.empty()) throw MlError("fit_tree: no rows");
  if (max_depth < 0) throw MlError("fit_tree: negative max_depth");
  const std::size_t d = rows.front().features.size();
  for (const auto& r : rows) {
    if (r.features.size() != d) throw MlError("fit_tree: inconsistent feature dimensions");
  }

  TreeModel model;
  model.max_depth = max_depth;
  std::function<int(const std::vector<std::size_t>&, int)> grow =
      [&](const std::vector<std::size_t>& idx, int depth) -> int {
    Counts counts;
    for (auto i : idx) ++counts[rows[i].label];
    const int at = static_cast<int>(model.nodes.size());
    model.nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority(counts)});
    if (depth >= max_depth || counts.size() <= 1) return at;

    const Split split = best_split(rows, idx, counts);
    if (split.feature < 0) return at;

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (rows[i].features[static_cast<std::size_t>(split.feature)] < split.threshold ? left : right)
          .push_back(i);
    }
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    TreeNode& node = model.nodes[static_cast<std::size_t>(at)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return at;
  };
  std::vector<std::size_t> all(rows.size());
  std::iota(all.begin(), all.end(), 0);
  grow(all, 0);
  return model;
}

const std::string& predict_tree(const TreeModel& model, std::span<const double> features) {
  if (model.nodes.empty()) throw MlError("predict_tree: empty model");
  const TreeNode* node = &model.nodes.front();
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    if (f >= features.size()) throw MlError("predict_tree: feature index out of range");
    node = &model.nodes[static_cast<std::size_t>(features[f] < node->threshold ? node->left
                                                                                : node->right)];
  }
  return node->label;
}

}  // namespace doa::ml
