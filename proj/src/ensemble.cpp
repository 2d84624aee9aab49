#include "bcforest/ensemble.hpp"

#include <cmath>
#include <string>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

constexpr std::size_t kCompensatedThreshold = 10000;

// Sums in index order; switches to Neumaier compensation for long sums.
class Accumulator {
 public:
  explicit Accumulator(std::size_t expected) : compensated_(expected >= kCompensatedThreshold) {}

  void add(double v) {
    if (!compensated_) {
      sum_ += v;
      return;
    }
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      correction_ += (sum_ - t) + v;
    } else {
      correction_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double total() const { return sum_ + correction_; }

 private:
  bool compensated_;
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace

void ResampleScheme::validate(std::size_t n) const {
  if (m < 1 || m > n) {
    throw ConfigError("sample size m=" + std::to_string(m) + " must be in [1, " + std::to_string(n) + "]");
  }
}

std::vector<std::uint32_t> ResampleScheme::draw(std::size_t n, RandomStream& rng) const {
  validate(n);
  std::vector<std::uint32_t> sample(m);
  if (replacement) {
    for (auto& s : sample) s = static_cast<std::uint32_t>(rng.below(n));
    return sample;
  }
  // Partial Fisher-Yates over the row indices.
  std::vector<std::uint32_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j < m; ++j) {
    std::swap(pool[j], pool[j + rng.below(n - j)]);
    sample[j] = pool[j];
  }
  return sample;
}

Ensemble::Ensemble(std::vector<Tree> trees, ResampleScheme scheme, SplitParams params)
    : trees_(std::move(trees)), scheme_(scheme), params_(params) {
  if (trees_.empty()) throw ConfigError("an ensemble needs at least one tree");
}

double Ensemble::predict(std::span<const double> x) const {
  if (x.size() != num_features()) {
    throw UsageError("prediction point has dimension " + std::to_string(x.size()) + ", ensemble expects " +
                     std::to_string(num_features()));
  }
  Accumulator acc(trees_.size());
  for (const Tree& tree : trees_) acc.add(tree.predict_unchecked(x.data()));
  return acc.total() / static_cast<double>(trees_.size());
}

std::vector<double> Ensemble::predict_rows(std::span<const double> rows, Execution exec) const {
  const std::size_t p = num_features();
  if (p == 0 || rows.size() % p != 0) throw UsageError("row matrix size is not a multiple of p");
  const std::size_t count = rows.size() / p;
  std::vector<double> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    Accumulator acc(trees_.size());
    const double* x = rows.data() + i * p;
    for (const Tree& tree : trees_) acc.add(tree.predict_unchecked(x));
    out[i] = acc.total() / static_cast<double>(trees_.size());
  });
  return out;
}

std::vector<Tree> fit_trees(std::size_t count, const std::function<Tree(std::size_t)>& make_tree,
                            Execution exec) {
  std::vector<Tree> trees(count);
  for_each_index(count, exec, [&](std::size_t b) { trees[b] = make_tree(b); });
  return trees;
}

Ensemble fit_ensemble(const Dataset& data, std::size_t num_trees, const ResampleScheme& scheme,
                      const SplitParams& params, const RngSpec& rng, Execution exec) {
  if (num_trees < 1) throw ConfigError("tree count B must be at least 1");
  scheme.validate(data.n());
  params.validate(data.p());
  auto trees = fit_trees(
      num_trees,
      [&](std::size_t b) {
        auto stream = derive_stream(rng, StreamRole::kBaseTree, b);
        const auto sample = scheme.draw(data.n(), stream);
        return fit_tree(data, sample, params, stream);
      },
      exec);
  return Ensemble(std::move(trees), scheme, params);
}

double predict_point(const Ensemble& ensemble, std::span<const double> x) { return ensemble.predict(x); }

std::vector<double> OobResult::valid_residuals() const {
  std::vector<double> out;
  out.reserve(residuals.size() - excluded_count);
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (valid[i]) out.push_back(residuals[i]);
  return out;
}

OobResult oob_residuals(const Ensemble& ensemble, const Dataset& data, Execution exec) {
  const std::size_t n = data.n();
  const std::size_t num_trees = ensemble.size();
  if (ensemble.num_features() != data.p()) throw UsageError("ensemble and dataset dimensions differ");

  // Row-major membership so each row scans a contiguous run of trees.
  std::vector<std::uint8_t> in_bag(n * num_trees, 0);
  for (std::size_t b = 0; b < num_trees; ++b) {
    for (std::uint32_t r : ensemble.in_bag(b)) {
      if (r >= n) throw UsageError("ensemble was not fitted on this dataset");
      in_bag[r * num_trees + b] = 1;
    }
  }

  OobResult result;
  result.residuals.assign(n, 0.0);
  result.valid.assign(n, 0);
  result.fitted.assign(n, 0.0);
  const auto& trees = ensemble.trees();
  for_each_index(n, exec, [&](std::size_t i) {
    const double* x = data.row(i).data();
    const std::uint8_t* member = in_bag.data() + i * num_trees;
    Accumulator all(num_trees);
    Accumulator oob(num_trees);
    std::size_t oob_count = 0;
    for (std::size_t b = 0; b < num_trees; ++b) {
      const double pred = trees[b].predict_unchecked(x);
      all.add(pred);
      if (!member[b]) {
        oob.add(pred);
        ++oob_count;
      }
    }
    result.fitted[i] = all.total() / static_cast<double>(num_trees);
    if (oob_count > 0) {
      result.residuals[i] = data.response(i) - oob.total() / static_cast<double>(oob_count);
      result.valid[i] = 1;
    }
  });
  for (std::uint8_t v : result.valid) result.excluded_count += v ? 0 : 1;
  return result;
}

double oob_mse(const OobResult& oob) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < oob.residuals.size(); ++i) {
    if (!oob.valid[i]) continue;
    sum += oob.residuals[i] * oob.residuals[i];
    ++count;
  }
  if (count == 0) throw UndefinedValueError("OOB MSE undefined: every observation is in every tree's sample");
  return sum / static_cast<double>(count);
}

double oob_mse(const Ensemble& ensemble, const Dataset& data, Execution exec) {
  return oob_mse(oob_residuals(ensemble, data, exec));
}

double stable_mean(std::span<const double> values) {
  if (values.empty()) throw UsageError("mean of an empty sequence");
  Accumulator acc(values.size());
  for (double v : values) acc.add(v);
  return acc.total() / static_cast<double>(values.size());
}

}  // namespace bcf
