#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcforest/dataset.hpp"
#include "bcforest/ensemble.hpp"
#include "bcforest/parallel.hpp"
#include "bcforest/rng.hpp"

namespace bcf {

enum class CorrectionKind { kRegression, kClassification };

struct CorrectionOptions {
  // Shadow tree count; 0 means twice the base tree count.
  std::size_t shadow_trees = 0;
  // Subtract the pool mean from the OOB residuals before resampling. Off by
  // default: OOB residuals already play the role of inflated residuals.
  bool center_residuals = false;
  Execution exec = Execution::kParallel;
};

// Base ensemble, the shadow ensemble fitted to residual-bootstrap (or
// parametric-bootstrap) responses, and the quantities the shadow was built
// from. Predicts 2 base(x) - shadow(x).
class CorrectedModel {
 public:
  CorrectedModel(Ensemble base, Ensemble shadow, std::vector<double> residual_pool,
                 std::vector<double> fitted_values, CorrectionKind kind, std::size_t excluded_count = 0);

  // Unclamped for regression; clamped to [0, 1] for classification.
  [[nodiscard]] double predict(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> predict_rows(std::span<const double> rows,
                                                 Execution exec = Execution::kParallel) const;
  // Uncorrected base predictions, clamped to [0, 1] for classification.
  [[nodiscard]] std::vector<double> predict_rows_base(std::span<const double> rows,
                                                      Execution exec = Execution::kParallel) const;

  [[nodiscard]] const Ensemble& base() const { return base_; }
  [[nodiscard]] const Ensemble& shadow() const { return shadow_; }
  [[nodiscard]] const std::vector<double>& residual_pool() const { return residual_pool_; }
  [[nodiscard]] const std::vector<double>& fitted_values() const { return fitted_values_; }
  [[nodiscard]] std::size_t shadow_trees() const { return shadow_.size(); }
  [[nodiscard]] std::size_t excluded_count() const { return excluded_count_; }
  [[nodiscard]] CorrectionKind kind() const { return kind_; }

 private:
  Ensemble base_;
  Ensemble shadow_;
  std::vector<double> residual_pool_;
  std::vector<double> fitted_values_;
  CorrectionKind kind_;
  std::size_t excluded_count_;
};

// Y°_i = fitted_i + pool[j_i] with j_i drawn uniformly with replacement; one
// draw per row, consumed from rng in row order.
std::vector<double> residual_bootstrap_responses(std::span<const double> fitted, std::span<const double> pool,
                                                 RandomStream& rng);
// Y°_i ~ Bernoulli(prob_i), consumed from rng in row order.
std::vector<double> parametric_bootstrap_responses(std::span<const double> prob, RandomStream& rng);

// Shadow ensemble of num_shadow trees. Tree b uses derive_stream(rng, shadow
// role, b) to draw a full response vector, then a sample under the base
// ensemble's scheme, then grows a tree with the base split parameters.
Ensemble build_shadow(const Ensemble& base, const Dataset& data, std::size_t num_shadow, const RngSpec& rng,
                      Execution exec = Execution::kParallel, bool center_residuals = false);
// Same, reusing an OOB pass already computed for this base ensemble.
Ensemble build_shadow(const Ensemble& base, const Dataset& data, const OobResult& oob, std::size_t num_shadow,
                      const RngSpec& rng, Execution exec = Execution::kParallel, bool center_residuals = false);

Ensemble build_shadow_classification(const Ensemble& base, const Dataset& data, std::size_t num_shadow,
                                     const RngSpec& rng, Execution exec = Execution::kParallel);
Ensemble build_shadow_classification(const Ensemble& base, const Dataset& data, std::span<const double> fitted,
                                     std::size_t num_shadow, const RngSpec& rng,
                                     Execution exec = Execution::kParallel);

double corrected_predict(const CorrectedModel& model, std::span<const double> x);
// Base ensemble mean clamped to [0, 1].
double estimate_prob(const Ensemble& base, std::span<const double> x);
double corrected_prob(const CorrectedModel& model, std::span<const double> x);

// Responses must all be 0 or 1.
void require_binary(const Dataset& data);

// Fits the base ensemble (num_trees trees) and its shadow (options.shadow_trees, default 2B).
CorrectedModel fit_corrected(const Dataset& data, std::size_t num_trees, const ResampleScheme& scheme,
                             const SplitParams& params, const RngSpec& rng, const CorrectionOptions& options = {});
CorrectedModel fit_corrected_classification(const Dataset& data, std::size_t num_trees, const ResampleScheme& scheme,
                                            const SplitParams& params, const RngSpec& rng,
                                            const CorrectionOptions& options = {});

}  // namespace bcf
