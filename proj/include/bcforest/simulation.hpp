#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bcforest/dataset.hpp"
#include "bcforest/rng.hpp"

namespace bcf {

enum class ModelKind {
  kLinear1d,
  kQuad1d,
  kSqrt10d,
  kQuad10d,
  kLogitLinear1d,
  kLogitQuad1d,
  kLogitSqrt10d,
  kLogitQuad10d,
};

// Simulation designs. One-dimensional models draw X ~ U[0, 1]; ten-dimensional
// models draw X from an equicorrelated Gaussian with variance 1.8 and
// pairwise covariance 0.8. Regression responses add N(0, noise_sd^2) noise;
// classification responses are Bernoulli(logistic(logit(X))).
struct SimModel {
  ModelKind kind = ModelKind::kLinear1d;
  double noise_sd = 0.1;

  [[nodiscard]] std::size_t dimension() const;
  [[nodiscard]] bool is_classification() const;
  [[nodiscard]] std::string name() const;
};

SimModel parse_model(const std::string& name, double noise_sd = 0.1);
std::vector<std::string> model_names();

double true_mean(const SimModel& model, std::span<const double> x);
double true_logit(const SimModel& model, std::span<const double> x);
double true_prob(const SimModel& model, std::span<const double> x);
// true_prob for classification models, true_mean otherwise.
double true_target(const SimModel& model, std::span<const double> x);

// Row-major n x dimension() design points.
std::vector<double> draw_inputs(const SimModel& model, std::size_t n, RandomStream& rng);

Dataset gen_1d(const SimModel& model, std::size_t n, RandomStream& rng);
Dataset gen_10d(const SimModel& model, std::size_t n, RandomStream& rng);
Dataset generate(const SimModel& model, std::size_t n, RandomStream& rng);

}  // namespace bcf
