#include "painscale/decision_tree.hpp"

#include <algorithm>
#include <cmath>

#include "painscale/error.hpp"

namespace painscale::models {

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = -1.0;
};

double impurity_from(const std::array<std::size_t, kNumPainClasses>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double g = 1.0;
  for (std::size_t c : counts) {
    const double f = static_cast<double>(c) / static_cast<double>(n);
    g -= f * f;
  }
  return g;
}

PainClass leaf_majority(const std::array<std::size_t, kNumPainClasses>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumPainClasses; ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<PainClass>(best);
}

// Best Gini-gain split over the node's samples. Candidate thresholds are
// midpoints between consecutive distinct sorted feature values, which keeps
// every threshold strictly between two observed values.
SplitChoice best_split(const Matrix& x, std::span<const PainClass> y,
                       std::span<const std::size_t> idx) {
  const std::size_t n = idx.size();
  std::array<std::size_t, kNumPainClasses> total{};
  for (std::size_t i : idx) ++total[static_cast<std::size_t>(y[i])];
  const double parent = impurity_from(total, n);

  SplitChoice choice;
  std::vector<std::pair<double, PainClass>> vals(n);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t r = 0; r < n; ++r) vals[r] = {x(idx[r], f), y[idx[r]]};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::array<std::size_t, kNumPainClasses> left{};
    std::size_t n_left = 0;
    for (std::size_t r = 0; r + 1 < n; ++r) {
      ++left[static_cast<std::size_t>(vals[r].second)];
      ++n_left;
      if (vals[r].first == vals[r + 1].first) continue;
      std::array<std::size_t, kNumPainClasses> right{};
      for (std::size_t c = 0; c < kNumPainClasses; ++c) right[c] = total[c] - left[c];
      const std::size_t n_right = n - n_left;
      const double weighted = (static_cast<double>(n_left) * impurity_from(left, n_left) +
                               static_cast<double>(n_right) * impurity_from(right, n_right)) /
                              static_cast<double>(n);
      const double gain = parent - weighted;
      const double threshold = vals[r].first + 0.5 * (vals[r + 1].first - vals[r].first);
      // strictly-better gain wins; scanning order makes equal-gain ties
      // resolve to (lowest feature, lowest threshold)
      if (!choice.found || gain > choice.gain) {
        choice.found = true;
        choice.feature = static_cast<int>(f);
        choice.threshold = threshold;
        choice.gain = gain;
      }
    }
  }
  return choice;
}

std::unique_ptr<TreeNode> grow(const Matrix& x, std::span<const PainClass> y,
                               std::vector<std::size_t> idx) {
  auto node = std::make_unique<TreeNode>();
  for (std::size_t i : idx) ++node->counts[static_cast<std::size_t>(y[i])];
  node->leaf_class = leaf_majority(node->counts);

  std::size_t present = 0;
  for (std::size_t c : node->counts)
    if (c > 0) ++present;
  if (present <= 1) return node;  // pure

  const SplitChoice split = best_split(x, y, idx);
  if (!split.found) return node;  // all feature rows identical; cannot separate

  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t i : idx) {
    if (x(i, static_cast<std::size_t>(split.feature)) <= split.threshold)
      left_idx.push_back(i);
    else
      right_idx.push_back(i);
  }
  node->feature = split.feature;
  node->threshold = split.threshold;
  node->left = grow(x, y, std::move(left_idx));
  node->right = grow(x, y, std::move(right_idx));
  return node;
}

int depth_of(const TreeNode* node) {
  if (node == nullptr || node->is_leaf()) return 0;
  return 1 + std::max(depth_of(node->left.get()), depth_of(node->right.get()));
}

std::size_t count_nodes(const TreeNode* node) {
  if (node == nullptr) return 0;
  return 1 + count_nodes(node->left.get()) + count_nodes(node->right.get());
}

}  // namespace

double gini_impurity(std::span<const std::size_t> counts) {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) return 0.0;
  double g = 1.0;
  for (std::size_t c : counts) {
    const double f = static_cast<double>(c) / static_cast<double>(n);
    g -= f * f;
  }
  return g;
}

int TreeModel::depth() const { return depth_of(root.get()); }
std::size_t TreeModel::node_count() const { return count_nodes(root.get()); }

TreeModel dt_fit(const Matrix& x, std::span<const PainClass> y, std::uint64_t /*seed*/) {
  if (y.empty()) throw Error("dt_fit: empty training set");
  if (x.rows() != y.size()) throw Error("dt_fit: X/y size mismatch");
  for (double v : x.flat())
    if (std::isnan(v)) throw Error("dt_fit: NaN in input");

  std::vector<std::size_t> idx(y.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  TreeModel model;
  model.root = grow(x, y, std::move(idx));
  return model;
}

PainClass dt_predict_one(const TreeModel& model, std::span<const double> row) {
  const TreeNode* node = model.root.get();
  if (node == nullptr) throw Error("dt_predict: empty model");
  while (!node->is_leaf()) {
    node = row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left.get()
                                                                           : node->right.get();
  }
  return node->leaf_class;
}

std::vector<PainClass> dt_predict(const TreeModel& model, const Matrix& x) {
  std::vector<PainClass> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(dt_predict_one(model, x.row(i)));
  return out;
}

}  // namespace painscale::models
