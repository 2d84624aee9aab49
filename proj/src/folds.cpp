#include "bcforest/folds.hpp"

#include <numeric>
#include <string>

#include "bcforest/error.hpp"
#include "bcforest/rng.hpp"

namespace bcf {

FoldAssignment make_folds(std::size_t n, std::size_t k, FoldMode mode, std::optional<std::uint64_t> seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  if (n < k) throw ConfigError("cannot make " + std::to_string(k) + " folds from " + std::to_string(n) + " rows");

  FoldAssignment folds;
  folds.k = k;
  folds.n = n;
  folds.order.resize(n);
  std::iota(folds.order.begin(), folds.order.end(), std::size_t{0});
  if (mode == FoldMode::kSeededShuffle) {
    auto rng = derive_stream(RngSpec{seed.value_or(0)}, StreamRole::kFoldShuffle, 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(folds.order[i], folds.order[rng.below(i + 1)]);
  }
  const std::size_t size = n / k;
  folds.assignment.resize(size * k);
  for (std::size_t pos = 0; pos < folds.assignment.size(); ++pos) folds.assignment[pos] = pos / size;
  return folds;
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t pos = 0; pos < retained(); ++pos)
    if (assignment[pos] == fold) rows.push_back(order[pos]);
  return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t pos = 0; pos < retained(); ++pos)
    if (assignment[pos] != fold) rows.push_back(order[pos]);
  return rows;
}

std::vector<std::size_t> FoldAssignment::dropped_rows() const {
  return {order.begin() + static_cast<std::ptrdiff_t>(retained()), order.end()};
}

}  // namespace bcf
