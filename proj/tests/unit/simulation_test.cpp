#include "bcforest/simulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bcforest/error.hpp"

namespace bcf {
namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

TEST(SimModel, NamesRoundTrip) {
  for (const auto& name : model_names()) EXPECT_EQ(parse_model(name).name(), name);
  EXPECT_THROW(parse_model("cubic1d"), ConfigError);
  EXPECT_EQ(parse_model("sqrt10d").dimension(), 10u);
  EXPECT_EQ(parse_model("quad1d").dimension(), 1u);
  EXPECT_TRUE(parse_model("logit-quad10d").is_classification());
  EXPECT_FALSE(parse_model("quad10d").is_classification());
}

TEST(TrueFunctions, KnownValues) {
  const std::vector<double> half{0.5};
  EXPECT_DOUBLE_EQ(true_mean(parse_model("linear1d"), half), 0.5);
  EXPECT_DOUBLE_EQ(true_mean(parse_model("quad1d"), std::vector<double>{0.0}), -0.25);
  EXPECT_DOUBLE_EQ(true_mean(parse_model("quad1d"), half), 0.0);

  std::vector<double> ones(10, 1.0);
  EXPECT_DOUBLE_EQ(true_mean(parse_model("sqrt10d"), ones), 1.0);
  EXPECT_DOUBLE_EQ(true_mean(parse_model("quad10d"), ones), -1.0);
  std::vector<double> mixed(10, -2.0);
  EXPECT_DOUBLE_EQ(true_mean(parse_model("sqrt10d"), mixed), std::sqrt(2.0));

  EXPECT_DOUBLE_EQ(true_logit(parse_model("logit-linear1d"), std::vector<double>{1.0}), 1.5);
  EXPECT_DOUBLE_EQ(true_logit(parse_model("logit-quad1d"), half), -2.17);
  EXPECT_NEAR(true_prob(parse_model("logit-quad1d"), half), 0.1025, 5e-5);
  EXPECT_DOUBLE_EQ(true_logit(parse_model("logit-sqrt10d"), ones), 5.0 * std::sqrt(10.0) - 5.0);
  EXPECT_DOUBLE_EQ(true_logit(parse_model("logit-quad10d"), ones), -2.0 * 10.0 + 2.4);
  EXPECT_DOUBLE_EQ(true_prob(parse_model("logit-linear1d"), half), 0.5);
  EXPECT_DOUBLE_EQ(true_target(parse_model("logit-linear1d"), std::vector<double>{0.0}), logistic(-1.5));
  EXPECT_DOUBLE_EQ(true_target(parse_model("linear1d"), std::vector<double>{0.25}), 0.25);
}

TEST(TrueFunctions, WrongKindOrDimension) {
  EXPECT_THROW(true_mean(parse_model("logit-linear1d"), std::vector<double>{0.5}), UsageError);
  EXPECT_THROW(true_logit(parse_model("linear1d"), std::vector<double>{0.5}), UsageError);
  EXPECT_THROW(true_prob(parse_model("quad10d"), std::vector<double>(10, 0.0)), UsageError);
  EXPECT_THROW(true_mean(parse_model("sqrt10d"), std::vector<double>{0.5}), UsageError);
}

TEST(Generate, ZeroNoiseLinearIsExact) {
  RandomStream rng(3);
  const Dataset d = generate(parse_model("linear1d", 0.0), 200, rng);
  for (std::size_t i = 0; i < d.n(); ++i) {
    EXPECT_EQ(d.response(i), d.feature(i, 0));
    EXPECT_GE(d.feature(i, 0), 0.0);
    EXPECT_LT(d.feature(i, 0), 1.0);
  }
}

TEST(Generate, OneDimensionalMoments) {
  RandomStream rng(4);
  const SimModel model = parse_model("linear1d");
  const Dataset d = generate(model, 100000, rng);
  double sx = 0.0, se = 0.0, se2 = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    sx += d.feature(i, 0);
    const double e = d.response(i) - d.feature(i, 0);
    se += e;
    se2 += e * e;
  }
  const double n = static_cast<double>(d.n());
  EXPECT_NEAR(sx / n, 0.5, 0.01);
  const double mean_e = se / n;
  EXPECT_NEAR(std::sqrt(se2 / n - mean_e * mean_e), 0.1, 0.005);
}

TEST(Generate, TenDimensionalCovariance) {
  RandomStream rng(5);
  const SimModel model = parse_model("sqrt10d");
  const std::size_t n = 100000;
  const auto x = draw_inputs(model, n, rng);
  ASSERT_EQ(x.size(), n * 10);
  double m0 = 0.0, m3 = 0.0, v0 = 0.0, c03 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m0 += x[i * 10];
    m3 += x[i * 10 + 3];
  }
  m0 /= n;
  m3 /= n;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i * 10] - m0;
    const double b = x[i * 10 + 3] - m3;
    v0 += a * a;
    c03 += a * b;
  }
  EXPECT_NEAR(m0, 0.0, 0.02);
  EXPECT_NEAR(v0 / (n - 1), 1.8, 0.05);
  EXPECT_NEAR(c03 / (n - 1), 0.8, 0.05);
}

TEST(Generate, ClassificationLabelsAreBernoulli) {
  RandomStream rng(6);
  const SimModel model = parse_model("logit-linear1d");
  const Dataset d = generate(model, 50000, rng);
  double labels = 0.0, probs = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const double y = d.response(i);
    ASSERT_TRUE(y == 0.0 || y == 1.0);
    labels += y;
    probs += true_prob(model, d.row(i));
  }
  EXPECT_NEAR(labels / d.n(), probs / d.n(), 0.01);
}

TEST(Generate, DeterministicPerStream) {
  RandomStream a(7), b(7);
  const SimModel model = parse_model("quad10d");
  const Dataset da = generate(model, 30, a);
  const Dataset db = generate(model, 30, b);
  EXPECT_TRUE(std::equal(da.features().begin(), da.features().end(), db.features().begin(), db.features().end()));
  EXPECT_TRUE(std::equal(da.responses().begin(), da.responses().end(), db.responses().begin()));
  RandomStream c(7);
  EXPECT_THROW(gen_1d(model, 10, c), UsageError);
}

}  // namespace
}  // namespace bcf
