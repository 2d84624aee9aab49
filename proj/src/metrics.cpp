#include "bcforest/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bcforest/error.hpp"

namespace bcf {

void PredictionMatrix::set_rep(std::size_t r, std::span<const double> values) {
  if (values.size() != points_) throw UsageError("prediction row has the wrong length");
  std::copy(values.begin(), values.end(), values_.begin() + static_cast<std::ptrdiff_t>(r * points_));
}

std::vector<double> PredictionMatrix::column(std::size_t point) const {
  std::vector<double> out(reps_);
  for (std::size_t r = 0; r < reps_; ++r) out[r] = at(r, point);
  return out;
}

std::optional<double> improvement(double numerator, double denominator) {
  if (denominator == 0.0) return std::nullopt;
  return 1.0 - numerator / denominator;
}

std::optional<double> ratio(double numerator, double denominator) {
  if (denominator == 0.0) return std::nullopt;
  return numerator / denominator;
}

MetricReport compute_metrics(const PredictionMatrix& uncorrected, const PredictionMatrix& corrected,
                             std::span<const double> truth, const PredictionMatrix* targets) {
  const std::size_t reps = uncorrected.reps();
  const std::size_t points = uncorrected.points();
  if (corrected.reps() != reps || corrected.points() != points || truth.size() != points) {
    throw UsageError("prediction matrices and truth vector disagree in shape");
  }
  if (targets && (targets->reps() != reps || targets->points() != points)) {
    throw UsageError("target matrix disagrees in shape");
  }
  if (reps < 2) throw ConfigError("at least two replications are needed");
  if (points == 0) throw ConfigError("no test points");

  MetricReport report;
  report.reps = reps;
  report.points.resize(points);
  const auto r_count = static_cast<double>(reps);
  for (std::size_t t = 0; t < points; ++t) {
    PointStats& s = report.points[t];
    s.truth = truth[t];
    double mean_u = 0, mean_c = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      mean_u += uncorrected.at(r, t);
      mean_c += corrected.at(r, t);
    }
    mean_u /= r_count;
    mean_c /= r_count;
    double ss_u = 0, ss_c = 0, se_u = 0, se_c = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double u = uncorrected.at(r, t);
      const double c = corrected.at(r, t);
      const double target = targets ? targets->at(r, t) : truth[t];
      ss_u += (u - mean_u) * (u - mean_u);
      ss_c += (c - mean_c) * (c - mean_c);
      se_u += (u - target) * (u - target);
      se_c += (c - target) * (c - target);
    }
    s.bias_uncorrected = mean_u - truth[t];
    s.bias_corrected = mean_c - truth[t];
    s.var_uncorrected = ss_u / (r_count - 1);
    s.var_corrected = ss_c / (r_count - 1);
    s.mse_uncorrected = se_u / r_count;
    s.mse_corrected = se_c / r_count;

    report.mean_sq_bias_uncorrected += s.bias_uncorrected * s.bias_uncorrected;
    report.mean_sq_bias_corrected += s.bias_corrected * s.bias_corrected;
    report.mean_var_uncorrected += s.var_uncorrected;
    report.mean_var_corrected += s.var_corrected;
    report.mean_mse_uncorrected += s.mse_uncorrected;
    report.mean_mse_corrected += s.mse_corrected;
  }
  const auto p_count = static_cast<double>(points);
  report.mean_sq_bias_uncorrected /= p_count;
  report.mean_sq_bias_corrected /= p_count;
  report.mean_var_uncorrected /= p_count;
  report.mean_var_corrected /= p_count;
  report.mean_mse_uncorrected /= p_count;
  report.mean_mse_corrected /= p_count;

  report.bias_imp = improvement(report.mean_sq_bias_corrected, report.mean_sq_bias_uncorrected);
  report.pred_imp = improvement(report.mean_mse_corrected, report.mean_mse_uncorrected);
  report.var_ratio = ratio(report.mean_var_corrected, report.mean_var_uncorrected);
  return report;
}

MisclassificationRates misclassification(const PredictionMatrix& uncorrected, const PredictionMatrix& corrected,
                                         const PredictionMatrix& labels) {
  if (labels.reps() != uncorrected.reps() || labels.points() != uncorrected.points() ||
      corrected.reps() != uncorrected.reps() || corrected.points() != uncorrected.points()) {
    throw UsageError("label matrix disagrees in shape");
  }
  std::size_t wrong_u = 0, wrong_c = 0;
  for (std::size_t r = 0; r < labels.reps(); ++r) {
    for (std::size_t t = 0; t < labels.points(); ++t) {
      const bool label = labels.at(r, t) >= 0.5;
      wrong_u += (uncorrected.at(r, t) >= 0.5) != label ? 1 : 0;
      wrong_c += (corrected.at(r, t) >= 0.5) != label ? 1 : 0;
    }
  }
  const auto total = static_cast<double>(labels.reps() * labels.points());
  return {static_cast<double>(wrong_u) / total, static_cast<double>(wrong_c) / total};
}

double empirical_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw UsageError("quantile of an empty sample");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("quantile level must be in [0, 1]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
  const std::size_t index = rank == 0 ? 0 : std::min(rank - 1, n - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index), values.end());
  return values[index];
}

}  // namespace bcf
