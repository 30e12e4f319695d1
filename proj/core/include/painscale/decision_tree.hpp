#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "painscale/matrix.hpp"
#include "painscale/models.hpp"
#include "painscale/types.hpp"

namespace painscale::models {

/// CART classification tree: greedy Gini splits at midpoint thresholds,
/// grown until nodes are pure or unsplittable (no depth limit). Equal-gain
/// splits resolve to the lowest feature index, then the lowest threshold,
/// so fitting is deterministic.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::array<std::size_t, kNumPainClasses> counts{};  // training class counts at this node
  PainClass leaf_class = PainClass::Mild;
  std::unique_ptr<TreeNode> left;   // x[feature] <= threshold
  std::unique_ptr<TreeNode> right;  // x[feature] >  threshold

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::unique_ptr<TreeNode> root;

  int depth() const;
  std::size_t node_count() const;
};

double gini_impurity(std::span<const std::size_t> counts);

/// `seed` is accepted for interface symmetry with the other fitters; the
/// tie rules above make the result independent of it.
TreeModel dt_fit(const Matrix& x, std::span<const PainClass> y, std::uint64_t seed = 0);

PainClass dt_predict_one(const TreeModel& model, std::span<const double> row);
std::vector<PainClass> dt_predict(const TreeModel& model, const Matrix& x);

}  // namespace painscale::models
