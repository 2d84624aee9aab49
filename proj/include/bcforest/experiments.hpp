#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcforest/correction.hpp"
#include "bcforest/dataset.hpp"
#include "bcforest/ensemble.hpp"
#include "bcforest/folds.hpp"
#include "bcforest/metrics.hpp"
#include "bcforest/parallel.hpp"
#include "bcforest/rng.hpp"
#include "bcforest/simulation.hpp"
#include "bcforest/tree.hpp"

namespace bcf {

using ProgressFn = std::function<void(const std::string&)>;

struct ExperimentConfig {
  SimModel model;
  std::size_t n = 1000;
  std::size_t num_trees = 1000;
  // 0 = 2 * num_trees.
  std::size_t shadow_trees = 0;
  ResampleScheme scheme = ResampleScheme::bootstrap(1000);
  SplitParams params;
  std::size_t reps = 100;
  std::size_t n_test = 100;
  RngSpec rng;
  bool center_residuals = false;
  // Noise added to the test targets used for Pred Imp; 0 keeps them noiseless.
  double test_noise_sd = 0.0;
  Execution exec = Execution::kParallel;
  ProgressFn progress;
};

// Everything recorded by a Monte-Carlo experiment. Predictions are indexed
// [replication][test point]; the same test inputs are used for every
// replication and for both predictors.
struct ExperimentResult {
  MetricReport report;
  std::vector<double> test_points;
  std::vector<double> truth;
  PredictionMatrix uncorrected;
  PredictionMatrix corrected;
  PredictionMatrix targets;
  // Classification only: test labels drawn per replication from the true
  // probabilities.
  PredictionMatrix labels;
  std::size_t excluded_total = 0;
};

// Replication r draws fresh training data and fits the base ensemble and its correction
// with seeds derived from (rng, r), then predicts the fixed test set.
ExperimentResult run_bias_experiment(const ExperimentConfig& config);
ExperimentResult run_classification_experiment(const ExperimentConfig& config);

struct CvConfig {
  std::size_t folds = 10;
  FoldMode mode = FoldMode::kContiguous;
  std::uint64_t fold_seed = 0;
  std::size_t num_trees = 1000;
  // 0 = 2 * num_trees.
  std::size_t shadow_trees = 0;
  // 0 = size of each training fold.
  std::size_t m = 0;
  bool replacement = true;
  // Defaults to random-forest parameters for the data's p.
  std::optional<SplitParams> params;
  RngSpec rng;
  bool center_residuals = false;
  Execution exec = Execution::kParallel;
  ProgressFn progress;
};

struct CvFold {
  std::size_t size = 0;
  double rf_sse = 0.0;
  double rfc_sse = 0.0;
};

struct CvResult {
  double var_y = 0.0;
  double rf_err = 0.0;
  double rfc_err = 0.0;
  // 1 - rf_err / Var(Y); 0 when Y is constant.
  double rf_imp = 0.0;
  // 1 - rfc_err / rf_err; 0 when both errors are 0, empty when only rf_err is.
  std::optional<double> rfc_imp;
  std::size_t retained = 0;
  std::size_t dropped = 0;
  std::vector<CvFold> folds;
};

// k-fold cross-validation of the forest and its corrected version on the
// same folds. Errors are out-of-fold MSEs pooled over all retained rows.
CvResult run_cv(const Dataset& data, const CvConfig& config);

struct VarianceRow {
  std::size_t shadow_trees = 0;
  double mean_variance = 0.0;
  std::vector<double> point_variance;
};

struct VarianceTable {
  std::vector<VarianceRow> rows;

  // mean_variance of row i divided by that of row i - 1.
  [[nodiscard]] double ratio(std::size_t i) const;
};

// For each shadow size, rebuilds the shadow of a fixed base ensemble once
// per repeat and records the variance across repeats of the corrected
// prediction at every test point. repeat_rngs[r] seeds repeat r.
VarianceTable variance_scaling_check(const Dataset& data, const Ensemble& base, std::span<const std::size_t> shadow_sizes,
                                     std::span<const RngSpec> repeat_rngs, std::span<const double> test_points,
                                     Execution exec = Execution::kParallel, const ProgressFn& progress = {});
// Repeats seeded from rng.child(variance role, r).
VarianceTable variance_scaling_check(const Dataset& data, const Ensemble& base, std::span<const std::size_t> shadow_sizes,
                                     std::size_t repeats, std::span<const double> test_points, const RngSpec& rng,
                                     Execution exec = Execution::kParallel, const ProgressFn& progress = {});

struct FigureConfig {
  SimModel model;
  std::size_t n = 1000;
  std::size_t num_trees = 1000;
  std::size_t shadow_trees = 0;
  std::vector<std::size_t> m_list = {20, 200};
  std::size_t reps = 100;
  std::size_t grid_points = 200;
  SplitParams params;
  RngSpec rng;
  bool center_residuals = false;
  Execution exec = Execution::kParallel;
  ProgressFn progress;
};

struct FigureRow {
  std::size_t m = 0;
  double x = 0.0;
  double truth = 0.0;
  double uncorrected_q05 = 0.0;
  double uncorrected_mean = 0.0;
  double uncorrected_q95 = 0.0;
  double corrected_q05 = 0.0;
  double corrected_mean = 0.0;
  double corrected_q95 = 0.0;
};

struct FigureTable {
  std::vector<FigureRow> rows;

  [[nodiscard]] std::vector<FigureRow> for_m(std::size_t m) const;
};

// Quantile bands (5%, mean, 95%) of corrected and uncorrected predictions on
// an equally spaced grid over [0, 1], one block per subsample size. Sizes
// below n are drawn without replacement, m = n is a bootstrap.
FigureTable emit_figure_data(const FigureConfig& config);

std::vector<double> equally_spaced_grid(std::size_t count);

}  // namespace bcf
