#include "bcforest/correction.hpp"

#include <algorithm>
#include <string>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::size_t resolve_shadow_count(const CorrectionOptions& options, std::size_t num_trees) {
  return options.shadow_trees == 0 ? 2 * num_trees : options.shadow_trees;
}

// Shared shadow-fitting kernel: responses_for(b, stream) produces tree b's
// response vector, after which the sample and the tree consume the same stream.
template <class ResponseFn>
Ensemble fit_shadow_trees(const Ensemble& base, const Dataset& data, std::size_t num_shadow, const RngSpec& rng,
                          Execution exec, ResponseFn&& responses_for) {
  if (num_shadow < 1) throw ConfigError("shadow tree count must be at least 1");
  const ResampleScheme scheme = base.scheme();
  const SplitParams params = base.split_params();
  auto trees = fit_trees(
      num_shadow,
      [&](std::size_t b) {
        auto stream = derive_stream(rng, StreamRole::kShadowTree, b);
        const std::vector<double> y = responses_for(stream);
        const auto sample = scheme.draw(data.n(), stream);
        return fit_tree(data, sample, params, stream, y);
      },
      exec);
  return Ensemble(std::move(trees), scheme, params);
}

}  // namespace

CorrectedModel::CorrectedModel(Ensemble base, Ensemble shadow, std::vector<double> residual_pool,
                               std::vector<double> fitted_values, CorrectionKind kind, std::size_t excluded_count)
    : base_(std::move(base)),
      shadow_(std::move(shadow)),
      residual_pool_(std::move(residual_pool)),
      fitted_values_(std::move(fitted_values)),
      kind_(kind),
      excluded_count_(excluded_count) {
  if (base_.num_features() != shadow_.num_features()) throw UsageError("base and shadow dimensions differ");
}

double CorrectedModel::predict(std::span<const double> x) const {
  const double corrected = 2.0 * base_.predict(x) - shadow_.predict(x);
  return kind_ == CorrectionKind::kClassification ? clamp01(corrected) : corrected;
}

std::vector<double> CorrectedModel::predict_rows(std::span<const double> rows, Execution exec) const {
  auto base = base_.predict_rows(rows, exec);
  const auto shadow = shadow_.predict_rows(rows, exec);
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = 2.0 * base[i] - shadow[i];
    if (kind_ == CorrectionKind::kClassification) base[i] = clamp01(base[i]);
  }
  return base;
}

std::vector<double> CorrectedModel::predict_rows_base(std::span<const double> rows, Execution exec) const {
  auto base = base_.predict_rows(rows, exec);
  if (kind_ == CorrectionKind::kClassification)
    for (double& v : base) v = clamp01(v);
  return base;
}

std::vector<double> residual_bootstrap_responses(std::span<const double> fitted, std::span<const double> pool,
                                                 RandomStream& rng) {
  if (pool.empty()) throw AlgorithmError("residual pool is empty");
  std::vector<double> y(fitted.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) y[i] = fitted[i] + pool[rng.below(pool.size())];
  return y;
}

std::vector<double> parametric_bootstrap_responses(std::span<const double> prob, RandomStream& rng) {
  std::vector<double> y(prob.size());
  for (std::size_t i = 0; i < prob.size(); ++i) y[i] = rng.bernoulli(prob[i]) ? 1.0 : 0.0;
  return y;
}

Ensemble build_shadow(const Ensemble& base, const Dataset& data, const OobResult& oob, std::size_t num_shadow,
                      const RngSpec& rng, Execution exec, bool center_residuals) {
  std::vector<double> pool = oob.valid_residuals();
  if (pool.empty()) {
    throw AlgorithmError("no out-of-bag residuals: every observation is in every tree's sample");
  }
  if (center_residuals) {
    const double mean = stable_mean(pool);
    for (double& r : pool) r -= mean;
  }
  const std::span<const double> fitted = oob.fitted;
  return fit_shadow_trees(base, data, num_shadow, rng, exec,
                          [&](RandomStream& stream) { return residual_bootstrap_responses(fitted, pool, stream); });
}

Ensemble build_shadow(const Ensemble& base, const Dataset& data, std::size_t num_shadow, const RngSpec& rng,
                      Execution exec, bool center_residuals) {
  if (num_shadow < 1) throw ConfigError("shadow tree count must be at least 1");
  return build_shadow(base, data, oob_residuals(base, data, exec), num_shadow, rng, exec, center_residuals);
}

Ensemble build_shadow_classification(const Ensemble& base, const Dataset& data, std::span<const double> fitted,
                                     std::size_t num_shadow, const RngSpec& rng, Execution exec) {
  require_binary(data);
  if (fitted.size() != data.n()) throw UsageError("fitted values must have length n");
  std::vector<double> prob(fitted.begin(), fitted.end());
  for (double& v : prob) v = clamp01(v);
  return fit_shadow_trees(base, data, num_shadow, rng, exec,
                          [&](RandomStream& stream) { return parametric_bootstrap_responses(prob, stream); });
}

Ensemble build_shadow_classification(const Ensemble& base, const Dataset& data, std::size_t num_shadow,
                                     const RngSpec& rng, Execution exec) {
  require_binary(data);
  if (num_shadow < 1) throw ConfigError("shadow tree count must be at least 1");
  const auto fitted = base.predict_rows(data, exec);
  return build_shadow_classification(base, data, fitted, num_shadow, rng, exec);
}

double corrected_predict(const CorrectedModel& model, std::span<const double> x) {
  return 2.0 * model.base().predict(x) - model.shadow().predict(x);
}

double estimate_prob(const Ensemble& base, std::span<const double> x) { return clamp01(base.predict(x)); }

double corrected_prob(const CorrectedModel& model, std::span<const double> x) {
  return clamp01(2.0 * model.base().predict(x) - model.shadow().predict(x));
}

void require_binary(const Dataset& data) {
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double y = data.response(i);
    if (y != 0.0 && y != 1.0) {
      throw UsageError("classification requires 0/1 responses; row " + std::to_string(i) + " has " +
                       std::to_string(y));
    }
  }
}

CorrectedModel fit_corrected(const Dataset& data, std::size_t num_trees, const ResampleScheme& scheme,
                             const SplitParams& params, const RngSpec& rng, const CorrectionOptions& options) {
  const std::size_t num_shadow = resolve_shadow_count(options, num_trees);
  auto base = fit_ensemble(data, num_trees, scheme, params, rng, options.exec);
  const OobResult oob = oob_residuals(base, data, options.exec);
  auto shadow = build_shadow(base, data, oob, num_shadow, rng, options.exec, options.center_residuals);
  std::vector<double> pool = oob.valid_residuals();
  if (options.center_residuals) {
    const double mean = stable_mean(pool);
    for (double& r : pool) r -= mean;
  }
  return CorrectedModel(std::move(base), std::move(shadow), std::move(pool), oob.fitted,
                        CorrectionKind::kRegression, oob.excluded_count);
}

CorrectedModel fit_corrected_classification(const Dataset& data, std::size_t num_trees,
                                            const ResampleScheme& scheme, const SplitParams& params,
                                            const RngSpec& rng, const CorrectionOptions& options) {
  require_binary(data);
  const std::size_t num_shadow = resolve_shadow_count(options, num_trees);
  auto base = fit_ensemble(data, num_trees, scheme, params, rng, options.exec);
  const auto fitted = base.predict_rows(data, options.exec);
  auto shadow = build_shadow_classification(base, data, fitted, num_shadow, rng, options.exec);
  return CorrectedModel(std::move(base), std::move(shadow), {}, fitted, CorrectionKind::kClassification);
}

}  // namespace bcf
