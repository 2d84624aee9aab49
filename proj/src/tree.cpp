#include "bcforest/tree.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

std::atomic<std::uint64_t> g_fit_count{0};

constexpr double kTieTolerance = 1e-12;

struct Candidate {
  double gain = 0.0;
  std::int32_t feature = -1;
  double threshold = 0.0;
};

struct ValueResponse {
  double x;
  double y;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const double> y, const SplitParams& params, RandomStream& rng)
      : data_(data), y_(y), params_(params), rng_(rng), features_(data.p()) {
    std::iota(features_.begin(), features_.end(), 0);
  }

  std::vector<TreeNode> build(std::vector<std::uint32_t> rows) {
    rows_ = std::move(rows);
    buffer_.resize(rows_.size());
    grow(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    const std::size_t count = end - begin;

    double sum = 0.0;
    double lo = y_[rows_[begin]];
    double hi = lo;
    for (std::size_t k = begin; k < end; ++k) {
      const double v = y_[rows_[k]];
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = sum / static_cast<double>(count);
    nodes_[id].value = mean;
    nodes_[id].count = static_cast<std::uint32_t>(count);

    if (count < 2 * params_.min_leaf || count < params_.min_split || lo == hi || depth >= params_.max_depth) return id;

    const Candidate best = find_split(begin, end, mean);
    if (best.feature < 0) return id;

    const auto column = data_.column(static_cast<std::size_t>(best.feature));
    auto middle = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::uint32_t r) { return column[r] <= best.threshold; });
    const auto split = static_cast<std::size_t>(middle - rows_.begin());

    const std::int32_t left = grow(begin, split, depth + 1);
    const std::int32_t right = grow(split, end, depth + 1);
    TreeNode& node = nodes_[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Candidate find_split(std::size_t begin, std::size_t end, double mean) {
    const std::size_t count = end - begin;
    const std::size_t p = features_.size();
    const std::size_t mtry = params_.mtry;
    if (mtry < p) {
      // Partial Fisher-Yates; candidates are then visited in index order so
      // that tie-breaking does not depend on the draw order.
      for (std::size_t j = 0; j < mtry; ++j) std::swap(features_[j], features_[j + rng_.below(p - j)]);
      std::sort(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(mtry));
    }

    Candidate best;
    const std::size_t min_leaf = params_.min_leaf;
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const std::size_t f = features_[fi];
      const auto column = data_.column(f);
      double total = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        const std::uint32_t r = rows_[begin + k];
        buffer_[k] = {column[r], y_[r] - mean};
        total += buffer_[k].y;
      }
      std::sort(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(count),
                [](const ValueResponse& a, const ValueResponse& b) { return a.x < b.x; });
      if (buffer_[0].x == buffer_[count - 1].x) continue;

      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < count; ++k) {
        left_sum += buffer_[k].y;
        if (buffer_[k].x == buffer_[k + 1].x) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = count - n_left;
        if (n_left < min_leaf) continue;
        if (n_right < min_leaf) break;
        const double right_sum = total - left_sum;
        // Reduction in summed squared error relative to the parent, up to the
        // constant term of the centred responses.
        const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                            right_sum * right_sum / static_cast<double>(n_right);
        // Gains equal up to rounding count as ties and keep the earlier
        // candidate (lower feature, then smaller threshold).
        if (gain > best.gain * (1.0 + kTieTolerance)) {
          best.gain = gain;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = midpoint(buffer_[k].x, buffer_[k + 1].x);
        }
      }
    }
    return best;
  }

  static double midpoint(double a, double b) {
    const double mid = a + (b - a) / 2.0;
    // Adjacent doubles can round the midpoint up onto b.
    return mid < b ? mid : a;
  }

  const Dataset& data_;
  std::span<const double> y_;
  const SplitParams& params_;
  RandomStream& rng_;
  std::vector<std::size_t> features_;
  std::vector<std::uint32_t> rows_;
  std::vector<ValueResponse> buffer_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

SplitParams SplitParams::random_forest(std::size_t p) {
  SplitParams params;
  params.mtry = std::max<std::size_t>(p / 3, 1);
  return params;
}

SplitParams SplitParams::bagged(std::size_t p) {
  SplitParams params;
  params.mtry = p;
  return params;
}

void SplitParams::validate(std::size_t p) const {
  if (min_leaf < 1) throw ConfigError("min_leaf must be at least 1");
  if (mtry < 1 || mtry > p) {
    throw ConfigError("mtry must be in [1, " + std::to_string(p) + "], got " + std::to_string(mtry));
  }
}

double Tree::predict(std::span<const double> x) const {
  if (x.size() != p_) {
    throw UsageError("prediction point has dimension " + std::to_string(x.size()) + ", tree expects " +
                     std::to_string(p_));
  }
  return predict_unchecked(x.data());
}

std::size_t Tree::leaf_of(std::span<const double> x) const {
  if (x.size() != p_) throw UsageError("prediction point has wrong dimension");
  std::int32_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& node = nodes_[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return static_cast<std::size_t>(id);
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    deepest = std::max(deepest, level[id]);
    if (!nodes_[id].is_leaf()) {
      level[static_cast<std::size_t>(nodes_[id].left)] = level[id] + 1;
      level[static_cast<std::size_t>(nodes_[id].right)] = level[id] + 1;
    }
  }
  return deepest;
}

Tree fit_tree(const Dataset& data, std::span<const std::uint32_t> sample, const SplitParams& params,
              RandomStream& rng, std::span<const double> responses) {
  if (sample.empty()) throw UsageError("fit_tree: empty sample");
  params.validate(data.p());
  for (std::uint32_t r : sample) {
    if (r >= data.n()) throw UsageError("fit_tree: sample index " + std::to_string(r) + " out of range");
  }
  if (responses.empty()) {
    responses = data.responses();
  } else if (responses.size() != data.n()) {
    throw UsageError("fit_tree: response override must have length n");
  }
  g_fit_count.fetch_add(1, std::memory_order_relaxed);

  std::vector<std::uint32_t> in_bag(sample.begin(), sample.end());
  TreeBuilder builder(data, responses, params, rng);
  auto nodes = builder.build(in_bag);
  return Tree(std::move(nodes), std::move(in_bag), data.p());
}

double predict_tree(const Tree& tree, std::span<const double> x) { return tree.predict(x); }

std::uint64_t tree_fit_count() { return g_fit_count.load(std::memory_order_relaxed); }

}  // namespace bcf
