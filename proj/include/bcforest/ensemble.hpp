#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bcforest/dataset.hpp"
#include "bcforest/parallel.hpp"
#include "bcforest/rng.hpp"
#include "bcforest/tree.hpp"

namespace bcf {

// Per-tree sample: m rows drawn with replacement (bootstrap) or without
// (subsample).
struct ResampleScheme {
  std::size_t m = 0;
  bool replacement = true;

  static ResampleScheme bootstrap(std::size_t n) { return {n, true}; }
  static ResampleScheme subsample(std::size_t m) { return {m, false}; }

  void validate(std::size_t n) const;
  // Draws one in-bag multiset of row indices from [0, n).
  std::vector<std::uint32_t> draw(std::size_t n, RandomStream& rng) const;
};

// Average of B trees, each with its in-bag multiset.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::vector<Tree> trees, ResampleScheme scheme, SplitParams params);

  [[nodiscard]] double predict(std::span<const double> x) const;
  // Predictions at every row of a row-major matrix with p columns.
  [[nodiscard]] std::vector<double> predict_rows(std::span<const double> rows,
                                                 Execution exec = Execution::kParallel) const;
  [[nodiscard]] std::vector<double> predict_rows(const Dataset& data,
                                                 Execution exec = Execution::kParallel) const {
    return predict_rows(data.features(), exec);
  }

  [[nodiscard]] std::size_t size() const { return trees_.size(); }
  [[nodiscard]] std::size_t num_features() const { return trees_.empty() ? 0 : trees_.front().num_features(); }
  [[nodiscard]] const std::vector<Tree>& trees() const { return trees_; }
  [[nodiscard]] const Tree& tree(std::size_t b) const { return trees_[b]; }
  [[nodiscard]] const std::vector<std::uint32_t>& in_bag(std::size_t b) const { return trees_[b].in_bag(); }
  [[nodiscard]] const ResampleScheme& scheme() const { return scheme_; }
  [[nodiscard]] const SplitParams& split_params() const { return params_; }

 private:
  std::vector<Tree> trees_;
  ResampleScheme scheme_;
  SplitParams params_;
};

// Tree b is grown on a sample drawn from derive_stream(rng, role, b), so the
// result does not depend on execution order.
Ensemble fit_ensemble(const Dataset& data, std::size_t num_trees, const ResampleScheme& scheme,
                      const SplitParams& params, const RngSpec& rng, Execution exec = Execution::kParallel);

// Generic per-tree training kernel. make_tree(b) must depend only on b.
std::vector<Tree> fit_trees(std::size_t count, const std::function<Tree(std::size_t)>& make_tree,
                            Execution exec);

double predict_point(const Ensemble& ensemble, std::span<const double> x);

// Out-of-bag residuals Y_i - mean_{b : i not in I_b} T_b(X_i). Rows that are
// in every tree's sample have no out-of-bag trees; they are marked invalid
// and counted.
struct OobResult {
  std::vector<double> residuals;
  std::vector<std::uint8_t> valid;
  // In-sample ensemble predictions over all B trees, computed in the same pass.
  std::vector<double> fitted;
  std::size_t excluded_count = 0;

  [[nodiscard]] std::vector<double> valid_residuals() const;
};

OobResult oob_residuals(const Ensemble& ensemble, const Dataset& data, Execution exec = Execution::kParallel);
double oob_mse(const Ensemble& ensemble, const Dataset& data, Execution exec = Execution::kParallel);
double oob_mse(const OobResult& oob);

// Arithmetic mean with Neumaier compensation once the count reaches 10^4.
double stable_mean(std::span<const double> values);

}  // namespace bcf
