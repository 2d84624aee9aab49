#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bcforest/dataset.hpp"
#include "bcforest/rng.hpp"

namespace bcf {

struct SplitParams {
  std::size_t min_leaf = 5;
  // Features drawn per node; equal to p gives bagged CART trees.
  std::size_t mtry = 1;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  // Nodes with fewer observations are not split; 0 leaves only the
  // 2 * min_leaf rule. min_leaf = 1, min_split = k + 1 mimics R randomForest's
  // nodesize = k.
  std::size_t min_split = 0;

  // Defaults for random-forest regression: mtry = max(p / 3, 1).
  static SplitParams random_forest(std::size_t p);
  // Defaults for bagged trees: mtry = p.
  static SplitParams bagged(std::size_t p);

  void validate(std::size_t p) const;
};

struct TreeNode {
  // -1 marks a leaf.
  std::int32_t feature = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;
  // Leaf mean; for internal nodes the mean of the responses that reached it.
  double value = 0.0;
  std::uint32_t count = 0;

  [[nodiscard]] bool is_leaf() const { return feature < 0; }
};

// A fitted regression tree plus the multiset of training rows it was grown on.
// Nodes are stored in preorder; node 0 is the root.
class Tree {
 public:
  Tree() = default;
  Tree(std::vector<TreeNode> nodes, std::vector<std::uint32_t> in_bag, std::size_t p)
      : nodes_(std::move(nodes)), in_bag_(std::move(in_bag)), p_(p) {}

  [[nodiscard]] double predict(std::span<const double> x) const;
  // Skips the dimension check; x must have length p.
  [[nodiscard]] double predict_unchecked(const double* x) const {
    std::int32_t id = 0;
    while (nodes_[id].feature >= 0) {
      const TreeNode& node = nodes_[id];
      id = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes_[id].value;
  }
  // Index of the leaf reached by x.
  [[nodiscard]] std::size_t leaf_of(std::span<const double> x) const;

  [[nodiscard]] const std::vector<TreeNode>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<std::uint32_t>& in_bag() const { return in_bag_; }
  [[nodiscard]] std::size_t num_features() const { return p_; }
  [[nodiscard]] std::size_t num_leaves() const;
  [[nodiscard]] std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<std::uint32_t> in_bag_;
  std::size_t p_ = 0;
};

// Greedy CART regression tree on the rows listed in `sample` (duplicates
// allowed), using `responses` in place of the dataset's own when non-empty.
//
// At each node, mtry features are drawn without replacement and the split
// minimising the summed within-child squared error over midpoints between
// consecutive distinct values is chosen. Ties go to the lowest feature index
// and then the smallest threshold. A node becomes a leaf when it holds fewer
// than max(2 * min_leaf, min_split) observations, its responses are constant, no split leaves
// min_leaf on both sides, or max_depth is reached.
Tree fit_tree(const Dataset& data, std::span<const std::uint32_t> sample, const SplitParams& params,
              RandomStream& rng, std::span<const double> responses = {});

double predict_tree(const Tree& tree, std::span<const double> x);

// Total fit_tree calls made by this process; used to audit training cost.
std::uint64_t tree_fit_count();

}  // namespace bcf
