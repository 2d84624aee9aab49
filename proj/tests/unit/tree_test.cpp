#include "bcforest/tree.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "bcforest/error.hpp"
#include "test_util.hpp"

namespace bcf {
namespace {

using testing::exhaustive_split;
using testing::random_dataset;

std::vector<std::uint32_t> all_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

// Rows of the sample that pass through each node.
std::vector<std::vector<std::uint32_t>> rows_per_node(const Tree& tree, const Dataset& data) {
  std::vector<std::vector<std::uint32_t>> per_node(tree.nodes().size());
  for (std::uint32_t r : tree.in_bag()) {
    std::int32_t id = 0;
    while (true) {
      per_node[id].push_back(r);
      const TreeNode& node = tree.nodes()[id];
      if (node.is_leaf()) break;
      id = data.feature(r, node.feature) <= node.threshold ? node.left : node.right;
    }
  }
  return per_node;
}

TEST(FitTree, ConstantResponsesGiveASingleLeaf) {
  const Dataset d({0.1, 0.5, 0.9, 0.3}, {2.5, 2.5, 2.5, 2.5}, 1);
  auto rng = derive_stream(RngSpec{1}, 0);
  const Tree t = fit_tree(d, all_rows(4), SplitParams{1, 1}, rng);
  EXPECT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(predict_tree(t, std::vector<double>{100.0}), 2.5);
}

TEST(FitTree, PerfectSeparationSplitsAtMidpoint) {
  const Dataset d({0, 0, 1, 1}, {0, 0, 10, 10}, 1);
  auto rng = derive_stream(RngSpec{1}, 0);
  const Tree t = fit_tree(d, all_rows(4), SplitParams{2, 1}, rng);
  ASSERT_EQ(t.nodes().size(), 3u);
  EXPECT_EQ(t.nodes()[0].feature, 0);
  EXPECT_EQ(t.nodes()[0].threshold, 0.5);
  EXPECT_EQ(predict_tree(t, std::vector<double>{0.2}), 0.0);
  EXPECT_EQ(predict_tree(t, std::vector<double>{0.9}), 10.0);
}

TEST(PredictTree, ConstantTreeAndDimensionCheck) {
  const Tree t = testing::constant_tree(2.0, 3);
  EXPECT_EQ(predict_tree(t, std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_THROW(predict_tree(t, std::vector<double>{1, 2}), UsageError);
}

TEST(FitTree, EmptySampleIsAUsageError) {
  const Dataset d({0, 1}, {0, 1}, 1);
  auto rng = derive_stream(RngSpec{1}, 0);
  EXPECT_THROW(fit_tree(d, {}, SplitParams{1, 1}, rng), UsageError);
  const std::vector<std::uint32_t> bad{5};
  EXPECT_THROW(fit_tree(d, bad, SplitParams{1, 1}, rng), UsageError);
}

TEST(FitTree, InvalidParamsAreRejected) {
  const Dataset d({0, 1}, {0, 1}, 1);
  auto rng = derive_stream(RngSpec{1}, 0);
  EXPECT_THROW(fit_tree(d, all_rows(2), SplitParams{1, 2}, rng), ConfigError);
  EXPECT_THROW(fit_tree(d, all_rows(2), SplitParams{0, 1}, rng), ConfigError);
}

TEST(FitTree, RootSplitMatchesExhaustiveSearch) {
  const Dataset d = random_dataset(30, 3, 77);
  auto rng = derive_stream(RngSpec{1}, 0);
  const auto rows = all_rows(30);
  const Tree t = fit_tree(d, rows, SplitParams{1, 3}, rng);
  const auto oracle = exhaustive_split(d, rows, 1, d.responses());
  ASSERT_TRUE(oracle.has_value());
  const TreeNode& root = t.nodes()[0];
  EXPECT_EQ(static_cast<std::size_t>(root.feature), oracle->feature);
  EXPECT_GE(root.threshold, oracle->lo);
  EXPECT_LT(root.threshold, oracle->hi);
}

// Every node of trees grown on bootstrap samples agrees with the exhaustive
// oracle: internal nodes pick the oracle's split, leaves are leaves for a
// legitimate reason, and leaf values are the means of the routed responses.
TEST(FitTree, EveryNodeMatchesExhaustiveOracle) {
  for (std::uint64_t instance = 0; instance < 100; ++instance) {
    RandomStream gen(1000 + instance);
    const std::size_t n = 5 + gen.below(36);
    const std::size_t p = 1 + gen.below(4);
    const std::size_t min_leaf = 1 + gen.below(3);
    const Dataset d = random_dataset(n, p, 5000 + instance);
    std::vector<std::uint32_t> sample(n);
    for (auto& s : sample) s = static_cast<std::uint32_t>(gen.below(n));

    auto rng = derive_stream(RngSpec{instance}, 0);
    const Tree t = fit_tree(d, sample, SplitParams{min_leaf, p}, rng);
    const auto per_node = rows_per_node(t, d);
    for (std::size_t id = 0; id < t.nodes().size(); ++id) {
      const TreeNode& node = t.nodes()[id];
      const auto& rows = per_node[id];
      ASSERT_EQ(rows.size(), node.count) << "instance " << instance;
      std::vector<double> ys;
      for (auto r : rows) ys.push_back(d.response(r));
      const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
      EXPECT_NEAR(node.value, mean, 1e-12);

      const auto oracle = exhaustive_split(d, rows, min_leaf, d.responses());
      if (node.is_leaf()) {
        const bool small = rows.size() < 2 * min_leaf;
        const bool constant = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys.front(); });
        EXPECT_TRUE(small || constant || !oracle.has_value()) << "instance " << instance << " node " << id;
      } else {
        ASSERT_TRUE(oracle.has_value()) << "instance " << instance << " node " << id;
        EXPECT_EQ(static_cast<std::size_t>(node.feature), oracle->feature) << "instance " << instance;
        EXPECT_GE(node.threshold, oracle->lo) << "instance " << instance;
        EXPECT_LT(node.threshold, oracle->hi) << "instance " << instance;
        EXPECT_GE(per_node[node.left].size(), min_leaf);
        EXPECT_GE(per_node[node.right].size(), min_leaf);
        // Children never have a larger summed squared error than the parent.
        std::vector<double> left, right;
        for (auto r : per_node[node.left]) left.push_back(d.response(r));
        for (auto r : per_node[node.right]) right.push_back(d.response(r));
        EXPECT_LE(testing::sse(left) + testing::sse(right), testing::sse(ys) + 1e-12);
      }
    }
  }
}

TEST(FitTree, InterpolatesDistinctRowsWithMinLeafOne) {
  const Dataset d = random_dataset(40, 2, 3);
  auto rng = derive_stream(RngSpec{2}, 0);
  const auto rows = all_rows(40);
  const Tree t = fit_tree(d, rows, SplitParams{1, 2}, rng);
  for (std::size_t i = 0; i < d.n(); ++i) {
    EXPECT_EQ(predict_tree(t, d.row(i)), d.response(i));
  }
}

TEST(FitTree, PredictionIsPiecewiseConstant) {
  const Dataset d = random_dataset(40, 1, 8);
  auto rng = derive_stream(RngSpec{2}, 0);
  const Tree t = fit_tree(d, all_rows(40), SplitParams{3, 1}, rng);
  std::vector<double> thresholds;
  for (const auto& node : t.nodes())
    if (!node.is_leaf()) thresholds.push_back(node.threshold);
  thresholds.push_back(1.0);
  std::sort(thresholds.begin(), thresholds.end());
  double lo = 0.0;
  for (double hi : thresholds) {
    const double a = lo + (hi - lo) * 0.25;
    const double b = lo + (hi - lo) * 0.75;
    EXPECT_EQ(predict_tree(t, std::vector<double>{a}), predict_tree(t, std::vector<double>{b}));
    lo = hi;
  }
}

TEST(FitTree, FullMtryIgnoresTheStream) {
  const Dataset d = random_dataset(35, 4, 12);
  const auto rows = all_rows(35);
  auto a = derive_stream(RngSpec{1}, 0);
  auto b = derive_stream(RngSpec{2}, 0);
  const Tree ta = fit_tree(d, rows, SplitParams{2, 4}, a);
  const Tree tb = fit_tree(d, rows, SplitParams{2, 4}, b);
  ASSERT_EQ(ta.nodes().size(), tb.nodes().size());
  for (std::size_t k = 0; k < ta.nodes().size(); ++k) {
    EXPECT_EQ(ta.nodes()[k].feature, tb.nodes()[k].feature);
    EXPECT_EQ(ta.nodes()[k].threshold, tb.nodes()[k].threshold);
    EXPECT_EQ(ta.nodes()[k].value, tb.nodes()[k].value);
  }
}

TEST(FitTree, RespectsMaxDepthAndMinLeaf) {
  const Dataset d = random_dataset(200, 3, 4);
  auto rng = derive_stream(RngSpec{3}, 0);
  SplitParams params{7, 2, 3};
  const Tree t = fit_tree(d, all_rows(200), params, rng);
  EXPECT_LE(t.depth(), 3u);
  for (const auto& node : t.nodes()) EXPECT_GE(node.count, 7u);
}

TEST(FitTree, TiesGoToLowestFeatureIndex) {
  // Features 0 and 2 are identical copies; both separate the responses.
  const Dataset d({0, 5, 0, 0, 1, 0, 1, 2, 1, 1, 3, 1}, {0, 0, 1, 1}, 3);
  auto rng = derive_stream(RngSpec{1}, 0);
  const Tree t = fit_tree(d, all_rows(4), SplitParams{1, 3}, rng);
  EXPECT_EQ(t.nodes()[0].feature, 0);
}

TEST(FitTree, ResponseOverrideIsUsed) {
  const Dataset d({0, 1}, {0, 0}, 1);
  const std::vector<double> y{3, 3};
  auto rng = derive_stream(RngSpec{1}, 0);
  const Tree t = fit_tree(d, all_rows(2), SplitParams{1, 1}, rng, y);
  EXPECT_EQ(predict_tree(t, std::vector<double>{0.0}), 3.0);
}

TEST(SplitParams, Defaults) {
  EXPECT_EQ(SplitParams::random_forest(10).mtry, 3u);
  EXPECT_EQ(SplitParams::random_forest(2).mtry, 1u);
  EXPECT_EQ(SplitParams::bagged(10).mtry, 10u);
  EXPECT_EQ(SplitParams::bagged(10).min_leaf, 5u);
}

TEST(FitTree, MinSplitStopsSmallNodes) {
  const Dataset d = random_dataset(12, 1, 31);
  auto rng = derive_stream(RngSpec{1}, 0);
  SplitParams params{1, 1};
  params.min_split = 13;
  EXPECT_EQ(fit_tree(d, all_rows(12), params, rng).nodes().size(), 1u);

  // min_leaf = 1 with a split threshold lets leaves hold a single row, unlike
  // min_leaf = 5 which needs 10 rows to split at all.
  params.min_split = 6;
  const Tree t = fit_tree(d, all_rows(12), params, rng);
  EXPECT_GT(t.nodes().size(), 1u);
  for (const TreeNode& node : t.nodes()) {
    if (!node.is_leaf()) EXPECT_GE(node.count, 6u);
  }
  EXPECT_EQ(fit_tree(d, all_rows(12), SplitParams{5, 1}, rng).nodes().size(), 3u);
}

}  // namespace
}  // namespace bcf
