#include "bcforest/ensemble.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "bcforest/error.hpp"
#include "test_util.hpp"

namespace bcf {
namespace {

using testing::constant_tree;
using testing::random_dataset;

Ensemble constant_ensemble(const std::vector<double>& values, const std::vector<std::vector<std::uint32_t>>& bags,
                           std::size_t p = 1) {
  std::vector<Tree> trees;
  for (std::size_t b = 0; b < values.size(); ++b) trees.push_back(constant_tree(values[b], p, bags[b]));
  return Ensemble(std::move(trees), ResampleScheme{2, false}, SplitParams{1, p});
}

TEST(PredictPoint, MeanOfTreePredictions) {
  const Ensemble e = constant_ensemble({10, 20, 30}, {{0}, {0}, {0}});
  EXPECT_EQ(predict_point(e, std::vector<double>{0.0}), 20.0);
  EXPECT_THROW(predict_point(e, std::vector<double>{0.0, 1.0}), UsageError);
}

TEST(PredictPoint, IdenticalTreesGiveThatTree) {
  const Ensemble e = constant_ensemble({4.25, 4.25, 4.25, 4.25}, {{0}, {0}, {0}, {0}});
  EXPECT_EQ(predict_point(e, std::vector<double>{0.0}), 4.25);
}

TEST(PredictPoint, MatchesManualAverageAndStaysWithinTreeRange) {
  const Dataset d = random_dataset(60, 3, 21);
  const Ensemble e = fit_ensemble(d, 25, ResampleScheme::bootstrap(60), SplitParams{2, 2}, RngSpec{5});
  const Dataset test = random_dataset(10, 3, 22);
  for (std::size_t i = 0; i < test.n(); ++i) {
    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t b = 0; b < e.size(); ++b) {
      const double v = predict_tree(e.tree(b), test.row(i));
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double pred = predict_point(e, test.row(i));
    EXPECT_NEAR(pred, sum / 25.0, 1e-12);
    EXPECT_GE(pred, lo);
    EXPECT_LE(pred, hi);
  }
}

TEST(FitEnsemble, SingleFullSubsampleEqualsOneTree) {
  const Dataset d = random_dataset(50, 2, 31);
  const Ensemble e = fit_ensemble(d, 1, ResampleScheme{50, false}, SplitParams{3, 2}, RngSpec{8});
  std::vector<std::uint32_t> rows(50);
  std::iota(rows.begin(), rows.end(), 0u);
  auto rng = derive_stream(RngSpec{0}, 0);
  const Tree single = fit_tree(d, rows, SplitParams{3, 2}, rng);
  const Dataset test = random_dataset(20, 2, 32);
  for (std::size_t i = 0; i < test.n(); ++i) EXPECT_NEAR(predict_point(e, test.row(i)), predict_tree(single, test.row(i)), 1e-12);
}

TEST(FitEnsemble, ConstantDataPredictsConstant) {
  const Dataset base = random_dataset(30, 2, 1);
  const Dataset d = base.with_responses(std::vector<double>(30, 1.5));
  for (std::size_t m : {5u, 30u}) {
    const Ensemble e = fit_ensemble(d, 7, ResampleScheme{m, m == 30}, SplitParams{1, 1}, RngSpec{2});
    EXPECT_EQ(predict_point(e, std::vector<double>{0.3, 0.7}), 1.5);
  }
}

TEST(FitEnsemble, ParallelAndSerialAreBitIdentical) {
  const Dataset d = random_dataset(50, 3, 41);
  const Ensemble s = fit_ensemble(d, 20, ResampleScheme::bootstrap(50), SplitParams{1, 2}, RngSpec{9}, Execution::kSerial);
  const Ensemble p = fit_ensemble(d, 20, ResampleScheme::bootstrap(50), SplitParams{1, 2}, RngSpec{9}, Execution::kParallel);
  const Dataset test = random_dataset(10, 3, 42);
  for (std::size_t i = 0; i < test.n(); ++i) EXPECT_EQ(predict_point(s, test.row(i)), predict_point(p, test.row(i)));
  EXPECT_EQ(s.predict_rows(test, Execution::kSerial), p.predict_rows(test, Execution::kParallel));
}

TEST(FitEnsemble, TreeOrderDoesNotMatter) {
  // Building tree b on its own yields the same tree as inside the ensemble.
  const Dataset d = random_dataset(40, 2, 43);
  const auto scheme = ResampleScheme::subsample(20);
  const Ensemble e = fit_ensemble(d, 6, scheme, SplitParams{1, 1}, RngSpec{4});
  auto stream = derive_stream(RngSpec{4}, StreamRole::kBaseTree, 5);
  const auto sample = scheme.draw(40, stream);
  const Tree t5 = fit_tree(d, sample, SplitParams{1, 1}, stream);
  EXPECT_EQ(e.in_bag(5), t5.in_bag());
  ASSERT_EQ(e.tree(5).nodes().size(), t5.nodes().size());
  for (std::size_t k = 0; k < t5.nodes().size(); ++k) EXPECT_EQ(e.tree(5).nodes()[k].threshold, t5.nodes()[k].threshold);
}

TEST(FitEnsemble, InvalidSchemeIsAConfigurationError) {
  const Dataset d = random_dataset(10, 1, 1);
  EXPECT_THROW(fit_ensemble(d, 3, ResampleScheme{11, false}, SplitParams{1, 1}, RngSpec{}), ConfigError);
  EXPECT_THROW(fit_ensemble(d, 3, ResampleScheme{0, true}, SplitParams{1, 1}, RngSpec{}), ConfigError);
  EXPECT_THROW(fit_ensemble(d, 0, ResampleScheme{5, true}, SplitParams{1, 1}, RngSpec{}), ConfigError);
}

TEST(ResampleScheme, SubsampleHasNoDuplicatesAndBootstrapHasM) {
  RandomStream rng(3);
  auto sub = ResampleScheme::subsample(30).draw(50, rng);
  EXPECT_EQ(sub.size(), 30u);
  std::sort(sub.begin(), sub.end());
  EXPECT_EQ(std::adjacent_find(sub.begin(), sub.end()), sub.end());
  EXPECT_EQ(ResampleScheme::bootstrap(50).draw(50, rng).size(), 50u);
}

TEST(OobResiduals, SingleOutOfBagTree) {
  const Ensemble e = constant_ensemble({10, 20, 30}, {{0, 1}, {1, 2}, {0, 2}});
  const Dataset d({0.0, 0.0, 0.0}, {25.0, 0.0, 0.0}, 1);
  const auto oob = oob_residuals(e, d);
  EXPECT_TRUE(oob.valid[0]);
  EXPECT_EQ(oob.residuals[0], 5.0);
  EXPECT_EQ(oob.residuals[1], 0.0 - 30.0);
  EXPECT_EQ(oob.residuals[2], 0.0 - 10.0);
  EXPECT_EQ(oob.fitted[0], 20.0);
  EXPECT_EQ(oob.excluded_count, 0u);
}

TEST(OobResiduals, ConstantTreesAndMasking) {
  const Ensemble e = constant_ensemble({3, 3}, {{0, 1}, {0, 2}});
  const Dataset d({0.0, 0.0, 0.0}, {1.0, 2.0, 4.0}, 1);
  const auto oob = oob_residuals(e, d);
  EXPECT_FALSE(oob.valid[0]);  // in both samples
  EXPECT_EQ(oob.excluded_count, 1u);
  EXPECT_EQ(oob.residuals[1], -1.0);
  EXPECT_EQ(oob.residuals[2], 1.0);
  EXPECT_EQ(oob.valid_residuals(), (std::vector<double>{-1.0, 1.0}));
}

TEST(OobResiduals, MatchesMembershipDoubleLoop) {
  const Dataset d = random_dataset(40, 2, 51);
  const Ensemble e = fit_ensemble(d, 30, ResampleScheme::bootstrap(40), SplitParams{2, 2}, RngSpec{3});
  const auto oob = oob_residuals(e, d);
  const auto oracle = testing::oob_by_membership(e, d);
  for (std::size_t i = 0; i < d.n(); ++i) {
    ASSERT_EQ(static_cast<bool>(oob.valid[i]), oracle[i].has_value());
    if (oracle[i]) EXPECT_NEAR(oob.residuals[i], *oracle[i], 1e-12);
  }
}

TEST(OobResiduals, SerialAndParallelAgree) {
  const Dataset d = random_dataset(80, 3, 52);
  const Ensemble e = fit_ensemble(d, 15, ResampleScheme::subsample(40), SplitParams{1, 1}, RngSpec{3});
  const auto s = oob_residuals(e, d, Execution::kSerial);
  const auto p = oob_residuals(e, d, Execution::kParallel);
  EXPECT_EQ(s.residuals, p.residuals);
  EXPECT_EQ(s.fitted, p.fitted);
}

TEST(OobResiduals, BootstrapOutOfBagFractionNearExpMinusOne) {
  const std::size_t n = 400;
  const Dataset d = random_dataset(n, 1, 53);
  const Ensemble e = fit_ensemble(d, 40, ResampleScheme::bootstrap(n), SplitParams{5, 1}, RngSpec{6});
  double total = 0.0;
  for (std::size_t b = 0; b < e.size(); ++b) {
    std::vector<std::uint8_t> in(n, 0);
    for (auto r : e.in_bag(b)) in[r] = 1;
    total += 1.0 - std::accumulate(in.begin(), in.end(), 0.0) / n;
  }
  EXPECT_NEAR(total / e.size(), std::exp(-1.0), 0.03);
}

TEST(OobResiduals, NoExclusionsAtPracticalForestSizes) {
  const Dataset d = random_dataset(500, 1, 54);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Ensemble e = fit_ensemble(d, 100, ResampleScheme::bootstrap(500), SplitParams{25, 1}, RngSpec{seed});
    EXPECT_EQ(oob_residuals(e, d).excluded_count, 0u) << "seed " << seed;
  }
}

TEST(OobMse, Values) {
  const Ensemble e = constant_ensemble({1, 1}, {{0}, {1}});
  const Dataset d({0.0, 0.0}, {3.0, -1.0}, 1);
  EXPECT_EQ(oob_mse(e, d), 4.0);

  const Dataset flat({0.0, 0.0}, {1.0, 1.0}, 1);
  EXPECT_EQ(oob_mse(e, flat), 0.0);

  const Dataset r = random_dataset(40, 2, 55);
  const Ensemble f = fit_ensemble(r, 20, ResampleScheme::bootstrap(40), SplitParams{2, 2}, RngSpec{1});
  const auto oob = oob_residuals(f, r);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.n(); ++i)
    if (oob.valid[i]) {
      sum += oob.residuals[i] * oob.residuals[i];
      ++count;
    }
  EXPECT_DOUBLE_EQ(oob_mse(f, r), sum / count);

  const Ensemble all_in = constant_ensemble({1}, {{0, 1}});
  EXPECT_THROW(oob_mse(all_in, d), UndefinedValueError);
}

TEST(StableMean, CompensatedForLongSums) {
  std::vector<double> values(20000, 0.1);
  values[0] = 1e16;
  values[1] = -1e16;
  // Exact answer is 19998 * 0.1 / 20000.
  EXPECT_NEAR(stable_mean(values), 19998 * 0.1 / 20000.0, 1e-15);
}

}  // namespace
}  // namespace bcf
