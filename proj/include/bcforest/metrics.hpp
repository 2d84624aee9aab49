#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bcf {

// reps x points matrix of predictions (or targets) recorded in an experiment.
class PredictionMatrix {
 public:
  PredictionMatrix() = default;
  PredictionMatrix(std::size_t reps, std::size_t points) : reps_(reps), points_(points), values_(reps * points) {}

  [[nodiscard]] std::size_t reps() const { return reps_; }
  [[nodiscard]] std::size_t points() const { return points_; }
  double& at(std::size_t rep, std::size_t point) { return values_[rep * points_ + point]; }
  [[nodiscard]] double at(std::size_t rep, std::size_t point) const { return values_[rep * points_ + point]; }
  [[nodiscard]] std::span<const double> rep(std::size_t r) const { return {values_.data() + r * points_, points_}; }
  void set_rep(std::size_t r, std::span<const double> values);
  [[nodiscard]] std::vector<double> column(std::size_t point) const;

 private:
  std::size_t reps_ = 0;
  std::size_t points_ = 0;
  std::vector<double> values_;
};

struct PointStats {
  double truth = 0.0;
  double bias_uncorrected = 0.0;
  double bias_corrected = 0.0;
  double var_uncorrected = 0.0;
  double var_corrected = 0.0;
  double mse_uncorrected = 0.0;
  double mse_corrected = 0.0;
};

// Summary comparing corrected to uncorrected predictions over a fixed test
// set. Ratios whose denominator is zero are left empty.
struct MetricReport {
  std::optional<double> bias_imp;
  std::optional<double> pred_imp;
  std::optional<double> var_ratio;
  std::optional<double> miss_imp;
  std::optional<double> miss_rate_uncorrected;
  std::optional<double> miss_rate_corrected;
  double mean_sq_bias_uncorrected = 0.0;
  double mean_sq_bias_corrected = 0.0;
  double mean_var_uncorrected = 0.0;
  double mean_var_corrected = 0.0;
  double mean_mse_uncorrected = 0.0;
  double mean_mse_corrected = 0.0;
  std::size_t reps = 0;
  std::vector<PointStats> points;
};

// Per point: bias = mean over reps minus truth, variance across reps (n - 1
// denominator), MSE = mean over reps of (prediction - target)^2. Targets
// default to the noiseless truth.
//   bias_imp  = 1 - mean corrected bias^2 / mean uncorrected bias^2
//   pred_imp  = 1 - mean corrected MSE / mean uncorrected MSE
//   var_ratio = mean corrected variance / mean uncorrected variance
MetricReport compute_metrics(const PredictionMatrix& uncorrected, const PredictionMatrix& corrected,
                             std::span<const double> truth, const PredictionMatrix* targets = nullptr);

struct MisclassificationRates {
  double uncorrected = 0.0;
  double corrected = 0.0;
};

// Class 1 is predicted when the probability is at least 0.5.
MisclassificationRates misclassification(const PredictionMatrix& uncorrected, const PredictionMatrix& corrected,
                                         const PredictionMatrix& labels);

// 1 - numerator / denominator, empty when the denominator is zero.
std::optional<double> improvement(double numerator, double denominator);
std::optional<double> ratio(double numerator, double denominator);

// Empirical quantile by inverse ECDF (order statistic ceil(alpha * n)), no
// interpolation. values need not be sorted.
double empirical_quantile(std::vector<double> values, double alpha);

}  // namespace bcf
