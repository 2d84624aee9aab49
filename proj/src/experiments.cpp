#include "bcforest/experiments.hpp"

#include <string>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

void report_progress(const ProgressFn& progress, const std::string& message) {
  if (progress) progress(message);
}

void validate_experiment(const ExperimentConfig& config) {
  if (config.reps < 2) throw ConfigError("at least two replications are needed");
  if (config.n_test < 1) throw ConfigError("at least one test point is needed");
  if (config.num_trees < 1) throw ConfigError("tree count B must be at least 1");
  config.scheme.validate(config.n);
  config.params.validate(config.model.dimension());
}

struct TestSet {
  std::vector<double> points;
  std::vector<double> truth;
};

TestSet draw_test_set(const SimModel& model, std::size_t n_test, const RngSpec& rng) {
  auto stream = derive_stream(rng, StreamRole::kTestSet, 0);
  TestSet test;
  test.points = draw_inputs(model, n_test, stream);
  const std::size_t p = model.dimension();
  test.truth.resize(n_test);
  for (std::size_t t = 0; t < n_test; ++t) test.truth[t] = true_target(model, {test.points.data() + t * p, p});
  return test;
}

CorrectionOptions correction_options(std::size_t shadow_trees, bool center, Execution exec) {
  CorrectionOptions options;
  options.shadow_trees = shadow_trees;
  options.center_residuals = center;
  options.exec = exec;
  return options;
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool classification) {
  validate_experiment(config);
  if (config.model.is_classification() != classification) {
    throw UsageError(std::string("model ") + config.model.name() +
                     (classification ? " is not a classification model" : " is not a regression model"));
  }
  const TestSet test = draw_test_set(config.model, config.n_test, config.rng);

  ExperimentResult result;
  result.test_points = test.points;
  result.truth = test.truth;
  result.uncorrected = PredictionMatrix(config.reps, config.n_test);
  result.corrected = PredictionMatrix(config.reps, config.n_test);
  result.targets = PredictionMatrix(config.reps, config.n_test);
  if (classification) result.labels = PredictionMatrix(config.reps, config.n_test);

  const auto options = correction_options(config.shadow_trees, config.center_residuals, config.exec);
  for (std::size_t r = 0; r < config.reps; ++r) {
    const RngSpec rep = config.rng.child(StreamRole::kReplication, r);
    auto data_stream = derive_stream(rep, StreamRole::kTrainingData, 0);
    const Dataset data = generate(config.model, config.n, data_stream);

    const CorrectedModel model =
        classification ? fit_corrected_classification(data, config.num_trees, config.scheme, config.params, rep, options)
                       : fit_corrected(data, config.num_trees, config.scheme, config.params, rep, options);
    result.excluded_total += model.excluded_count();
    result.uncorrected.set_rep(r, model.predict_rows_base(test.points, config.exec));
    result.corrected.set_rep(r, model.predict_rows(test.points, config.exec));

    auto noise = derive_stream(rep, StreamRole::kTestNoise, 0);
    for (std::size_t t = 0; t < config.n_test; ++t) {
      result.targets.at(r, t) = test.truth[t] + (config.test_noise_sd > 0 ? config.test_noise_sd * noise.normal() : 0.0);
    }
    if (classification) {
      auto labels = derive_stream(rep, StreamRole::kTestLabels, 0);
      for (std::size_t t = 0; t < config.n_test; ++t) result.labels.at(r, t) = labels.bernoulli(test.truth[t]) ? 1.0 : 0.0;
    }
    report_progress(config.progress, "replication " + std::to_string(r + 1) + "/" + std::to_string(config.reps));
  }

  result.report = compute_metrics(result.uncorrected, result.corrected, result.truth, &result.targets);
  if (classification) {
    const auto rates = misclassification(result.uncorrected, result.corrected, result.labels);
    result.report.miss_rate_uncorrected = rates.uncorrected;
    result.report.miss_rate_corrected = rates.corrected;
    result.report.miss_imp = improvement(rates.corrected, rates.uncorrected);
  }
  return result;
}

}  // namespace

ExperimentResult run_bias_experiment(const ExperimentConfig& config) { return run_experiment(config, false); }

ExperimentResult run_classification_experiment(const ExperimentConfig& config) { return run_experiment(config, true); }

CvResult run_cv(const Dataset& data, const CvConfig& config) {
  const FoldAssignment folds = make_folds(data.n(), config.folds, config.mode, config.fold_seed);
  const SplitParams params = config.params.value_or(SplitParams::random_forest(data.p()));
  const auto options = correction_options(config.shadow_trees, config.center_residuals, config.exec);

  CvResult result;
  result.var_y = response_variance(data);
  result.retained = folds.retained();
  result.dropped = data.n() - folds.retained();
  double rf_sse = 0.0;
  double rfc_sse = 0.0;
  for (std::size_t f = 0; f < folds.k; ++f) {
    const auto train_rows = folds.train_rows(f);
    const auto test_rows = folds.test_rows(f);
    const Dataset train = data.subset(train_rows);
    const Dataset test = data.subset(test_rows);
    const ResampleScheme scheme =
        config.m == 0 ? ResampleScheme::bootstrap(train.n()) : ResampleScheme{config.m, config.replacement};

    const CorrectedModel model =
        fit_corrected(train, config.num_trees, scheme, params, config.rng.child(StreamRole::kFold, f), options);
    const auto base = model.predict_rows_base(test.features(), config.exec);
    const auto corrected = model.predict_rows(test.features(), config.exec);

    CvFold fold;
    fold.size = test.n();
    for (std::size_t i = 0; i < test.n(); ++i) {
      const double y = test.response(i);
      fold.rf_sse += (base[i] - y) * (base[i] - y);
      fold.rfc_sse += (corrected[i] - y) * (corrected[i] - y);
    }
    rf_sse += fold.rf_sse;
    rfc_sse += fold.rfc_sse;
    result.folds.push_back(fold);
    report_progress(config.progress, "fold " + std::to_string(f + 1) + "/" + std::to_string(folds.k));
  }
  result.rf_err = rf_sse / static_cast<double>(result.retained);
  result.rfc_err = rfc_sse / static_cast<double>(result.retained);
  result.rf_imp = result.var_y == 0.0 ? 0.0 : 1.0 - result.rf_err / result.var_y;
  if (result.rf_err == 0.0) {
    result.rfc_imp = result.rfc_err == 0.0 ? std::optional<double>(0.0) : std::nullopt;
  } else {
    result.rfc_imp = 1.0 - result.rfc_err / result.rf_err;
  }
  return result;
}

double VarianceTable::ratio(std::size_t i) const {
  if (i == 0 || i >= rows.size()) throw UsageError("variance ratio needs a preceding row");
  return rows[i].mean_variance / rows[i - 1].mean_variance;
}

VarianceTable variance_scaling_check(const Dataset& data, const Ensemble& base, std::span<const std::size_t> shadow_sizes,
                                     std::span<const RngSpec> repeat_rngs, std::span<const double> test_points,
                                     Execution exec, const ProgressFn& progress) {
  const std::size_t repeats = repeat_rngs.size();
  if (repeats < 2) throw ConfigError("variance check needs at least two repeats");
  if (shadow_sizes.empty()) throw ConfigError("no shadow sizes given");
  const OobResult oob = oob_residuals(base, data, exec);
  const auto base_pred = base.predict_rows(test_points, exec);
  const std::size_t points = base_pred.size();

  VarianceTable table;
  for (std::size_t size : shadow_sizes) {
    PredictionMatrix corrected(repeats, points);
    for (std::size_t r = 0; r < repeats; ++r) {
      const RngSpec spec = repeat_rngs[r].child(StreamRole::kVarianceRepeat, size);
      const Ensemble shadow = build_shadow(base, data, oob, size, spec, exec);
      const auto shadow_pred = shadow.predict_rows(test_points, exec);
      for (std::size_t t = 0; t < points; ++t) corrected.at(r, t) = 2.0 * base_pred[t] - shadow_pred[t];
    }
    VarianceRow row;
    row.shadow_trees = size;
    row.point_variance.resize(points);
    for (std::size_t t = 0; t < points; ++t) {
      const auto column = corrected.column(t);
      double mean = 0.0;
      for (double v : column) mean += v;
      mean /= static_cast<double>(repeats);
      double ss = 0.0;
      for (double v : column) ss += (v - mean) * (v - mean);
      row.point_variance[t] = ss / static_cast<double>(repeats - 1);
      row.mean_variance += row.point_variance[t];
    }
    row.mean_variance /= static_cast<double>(points);
    table.rows.push_back(std::move(row));
    report_progress(progress, "shadow size " + std::to_string(size) + " done");
  }
  return table;
}

VarianceTable variance_scaling_check(const Dataset& data, const Ensemble& base, std::span<const std::size_t> shadow_sizes,
                                     std::size_t repeats, std::span<const double> test_points, const RngSpec& rng,
                                     Execution exec, const ProgressFn& progress) {
  std::vector<RngSpec> specs;
  for (std::size_t r = 0; r < repeats; ++r) specs.push_back(rng.child(StreamRole::kVarianceRepeat, r));
  return variance_scaling_check(data, base, shadow_sizes, specs, test_points, exec, progress);
}

std::vector<FigureRow> FigureTable::for_m(std::size_t m) const {
  std::vector<FigureRow> out;
  for (const auto& row : rows)
    if (row.m == m) out.push_back(row);
  return out;
}

std::vector<double> equally_spaced_grid(std::size_t count) {
  if (count < 2) throw ConfigError("grid needs at least two points");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(count - 1);
  return grid;
}

FigureTable emit_figure_data(const FigureConfig& config) {
  if (config.model.dimension() != 1 || config.model.is_classification()) {
    throw UsageError("figure data requires a one-dimensional regression model");
  }
  if (config.reps < 1) throw ConfigError("at least one replication is needed");
  if (config.m_list.empty()) throw ConfigError("no subsample sizes given");
  for (std::size_t m : config.m_list) ResampleScheme{m, m == config.n}.validate(config.n);
  config.params.validate(1);

  const auto grid = equally_spaced_grid(config.grid_points);
  const auto options = correction_options(config.shadow_trees, config.center_residuals, config.exec);
  std::vector<PredictionMatrix> uncorrected, corrected;
  for (std::size_t k = 0; k < config.m_list.size(); ++k) {
    uncorrected.emplace_back(config.reps, grid.size());
    corrected.emplace_back(config.reps, grid.size());
  }

  for (std::size_t r = 0; r < config.reps; ++r) {
    const RngSpec rep = config.rng.child(StreamRole::kReplication, r);
    auto data_stream = derive_stream(rep, StreamRole::kTrainingData, 0);
    const Dataset data = gen_1d(config.model, config.n, data_stream);
    for (std::size_t k = 0; k < config.m_list.size(); ++k) {
      const std::size_t m = config.m_list[k];
      const ResampleScheme scheme = m < config.n ? ResampleScheme::subsample(m) : ResampleScheme::bootstrap(config.n);
      const CorrectedModel model = fit_corrected(data, config.num_trees, scheme, config.params,
                                                 rep.child(StreamRole::kGeneral, m), options);
      uncorrected[k].set_rep(r, model.predict_rows_base(grid, config.exec));
      corrected[k].set_rep(r, model.predict_rows(grid, config.exec));
    }
    report_progress(config.progress, "replication " + std::to_string(r + 1) + "/" + std::to_string(config.reps));
  }

  FigureTable table;
  for (std::size_t k = 0; k < config.m_list.size(); ++k) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto u = uncorrected[k].column(g);
      const auto c = corrected[k].column(g);
      FigureRow row;
      row.m = config.m_list[k];
      row.x = grid[g];
      row.truth = true_mean(config.model, std::span<const double>(&grid[g], 1));
      row.uncorrected_q05 = empirical_quantile(u, 0.05);
      row.uncorrected_q95 = empirical_quantile(u, 0.95);
      row.corrected_q05 = empirical_quantile(c, 0.05);
      row.corrected_q95 = empirical_quantile(c, 0.95);
      double su = 0.0, sc = 0.0;
      for (std::size_t r = 0; r < config.reps; ++r) {
        su += u[r];
        sc += c[r];
      }
      row.uncorrected_mean = su / static_cast<double>(config.reps);
      row.corrected_mean = sc / static_cast<double>(config.reps);
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace bcf
