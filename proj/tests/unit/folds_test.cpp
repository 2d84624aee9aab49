#include "bcforest/folds.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "bcforest/error.hpp"

namespace bcf {
namespace {

TEST(MakeFolds, DivisibleCountKeepsEveryRow) {
  const auto folds = make_folds(10, 10);
  EXPECT_EQ(folds.retained(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(folds.test_rows(i), std::vector<std::size_t>{i});
  EXPECT_TRUE(folds.dropped_rows().empty());
}

TEST(MakeFolds, ContiguousDropsTrailingRows) {
  const auto folds = make_folds(23, 10);
  EXPECT_EQ(folds.retained(), 20u);
  EXPECT_EQ(folds.fold_size(), 2u);
  EXPECT_EQ(folds.dropped_rows(), (std::vector<std::size_t>{20, 21, 22}));
  EXPECT_EQ(folds.test_rows(3), (std::vector<std::size_t>{6, 7}));
  EXPECT_EQ(folds.train_rows(0).size(), 18u);
}

TEST(MakeFolds, ShuffleIsSeedDeterministic) {
  const auto a = make_folds(100, 10, FoldMode::kSeededShuffle, 1);
  const auto b = make_folds(100, 10, FoldMode::kSeededShuffle, 1);
  const auto c = make_folds(100, 10, FoldMode::kSeededShuffle, 2);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_NE(a.order, c.order);
}

TEST(MakeFolds, FoldsAndDroppedPartitionTheRows) {
  for (std::size_t n : {10u, 23u, 57u, 101u}) {
    for (auto mode : {FoldMode::kContiguous, FoldMode::kSeededShuffle}) {
      const auto folds = make_folds(n, 7, mode, 5);
      std::multiset<std::size_t> all;
      for (std::size_t f = 0; f < folds.k; ++f) {
        const auto rows = folds.test_rows(f);
        EXPECT_EQ(rows.size(), n / 7);
        all.insert(rows.begin(), rows.end());
      }
      const auto dropped = folds.dropped_rows();
      EXPECT_EQ(dropped.size(), n % 7);
      all.insert(dropped.begin(), dropped.end());
      ASSERT_EQ(all.size(), n);
      std::size_t expect = 0;
      for (auto v : all) EXPECT_EQ(v, expect++);
    }
  }
}

TEST(MakeFolds, ConfigurationErrors) {
  EXPECT_THROW(make_folds(5, 10), ConfigError);
  EXPECT_THROW(make_folds(5, 1), ConfigError);
}

}  // namespace
}  // namespace bcf
