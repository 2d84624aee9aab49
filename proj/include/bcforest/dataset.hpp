#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bcf {

// Training data: an n x p feature matrix, a length-n response vector and the
// feature names. Immutable after construction; every value is finite.
//
// Features are kept in both row-major (prediction walks a row) and
// column-major (split search scans a column) order.
class Dataset {
 public:
  Dataset(std::vector<double> row_major_features, std::vector<double> responses,
          std::vector<std::string> feature_names);
  Dataset(std::vector<double> row_major_features, std::vector<double> responses, std::size_t p);

  [[nodiscard]] std::size_t n() const { return responses_.size(); }
  [[nodiscard]] std::size_t p() const { return names_.size(); }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * p(), p()};
  }
  [[nodiscard]] std::span<const double> column(std::size_t j) const {
    return {cols_.data() + j * n(), n()};
  }
  [[nodiscard]] double feature(std::size_t i, std::size_t j) const { return rows_[i * p() + j]; }
  [[nodiscard]] std::span<const double> responses() const { return responses_; }
  [[nodiscard]] double response(std::size_t i) const { return responses_[i]; }
  [[nodiscard]] const std::vector<std::string>& feature_names() const { return names_; }
  [[nodiscard]] std::span<const double> features() const { return rows_; }

  // New dataset holding the given rows, in order.
  [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
  // Same features, different responses (length n).
  [[nodiscard]] Dataset with_responses(std::vector<double> responses) const;

 private:
  std::vector<double> rows_;
  std::vector<double> cols_;
  std::vector<double> responses_;
  std::vector<std::string> names_;
};

struct CsvOptions {
  bool header = true;
  // Column name, or zero-based index when given as a number.
  std::variant<std::string, std::size_t> target = std::size_t{0};
  // Columns (names, or zero-based indices as strings when there is no header)
  // removed before the target and features are taken.
  std::vector<std::string> drop_columns;
  // Columns whose values are integer-encoded (sorted distinct labels -> 0..k-1).
  std::vector<std::string> categorical_columns;
  // When true, rows containing a missing token in a retained column are
  // dropped; otherwise they are an ingestion error.
  bool drop_missing = false;
  std::vector<std::string> missing_tokens = {"", "NA", "?", "NaN", "nan"};
};

struct CsvLoadResult {
  Dataset data;
  std::size_t dropped_rows = 0;
};

CsvLoadResult load_csv_report(const std::string& path, const CsvOptions& options);
Dataset load_csv(const std::string& path, const CsvOptions& options);

// Writes features followed by the response column "y" (or the given name)
// with shortest round-trip formatting.
void write_csv(const std::string& path, const Dataset& data, const std::string& response_name = "y");

// Sample variance (n - 1 denominator) of the responses; 0 when n == 1.
double response_variance(const Dataset& data);

}  // namespace bcf
