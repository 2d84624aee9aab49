#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace bcf {

enum class FoldMode { kContiguous, kSeededShuffle };

// k equal folds over the first n' = k * floor(n / k) positions of a row
// ordering. In contiguous mode the ordering is the identity, so the trailing
// n - n' rows are the ones dropped; in shuffle mode the dropped rows are the
// trailing positions of the shuffled order.
struct FoldAssignment {
  std::size_t k = 0;
  std::size_t n = 0;
  // order[pos] is the data row at position pos; positions >= retained() are dropped.
  std::vector<std::size_t> order;
  // fold of each retained position.
  std::vector<std::size_t> assignment;

  [[nodiscard]] std::size_t retained() const { return assignment.size(); }
  [[nodiscard]] std::size_t fold_size() const { return retained() / k; }
  [[nodiscard]] std::vector<std::size_t> test_rows(std::size_t fold) const;
  [[nodiscard]] std::vector<std::size_t> train_rows(std::size_t fold) const;
  [[nodiscard]] std::vector<std::size_t> dropped_rows() const;
};

FoldAssignment make_folds(std::size_t n, std::size_t k, FoldMode mode = FoldMode::kContiguous,
                          std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace bcf
