#include "bcforest/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  names.reserve(p);
  for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(begin, end - begin + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell.push_back(c);
    } else if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::vector<double> row_major_features, std::vector<double> responses,
                 std::vector<std::string> feature_names)
    : rows_(std::move(row_major_features)),
      responses_(std::move(responses)),
      names_(std::move(feature_names)) {
  const std::size_t n_obs = responses_.size();
  const std::size_t n_feat = names_.size();
  if (n_obs == 0 || n_feat == 0) throw DataError("dataset needs n >= 1 and p >= 1");
  if (rows_.size() != n_obs * n_feat) {
    throw DataError("feature matrix has " + std::to_string(rows_.size()) + " values, expected " +
                    std::to_string(n_obs) + " x " + std::to_string(n_feat));
  }
  for (double v : rows_) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  }
  for (double v : responses_) {
    if (!std::isfinite(v)) throw DataError("non-finite response value");
  }
  cols_.resize(rows_.size());
  for (std::size_t i = 0; i < n_obs; ++i)
    for (std::size_t j = 0; j < n_feat; ++j) cols_[j * n_obs + i] = rows_[i * n_feat + j];
}

Dataset::Dataset(std::vector<double> row_major_features, std::vector<double> responses, std::size_t p)
    : Dataset(std::move(row_major_features), std::move(responses), default_names(p)) {}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> feats;
  std::vector<double> ys;
  feats.reserve(rows.size() * p());
  ys.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n()) throw UsageError("subset row index out of range");
    auto x = row(r);
    feats.insert(feats.end(), x.begin(), x.end());
    ys.push_back(responses_[r]);
  }
  return Dataset(std::move(feats), std::move(ys), names_);
}

Dataset Dataset::with_responses(std::vector<double> responses) const {
  if (responses.size() != n()) throw UsageError("replacement responses must have length n");
  return Dataset(rows_, std::move(responses), names_);
}

CsvLoadResult load_csv_report(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<std::vector<std::string>> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    records.push_back(split_line(line));
  }
  if (records.empty()) throw DataError("'" + path + "' is empty");

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (options.header) {
    header = records.front();
    first_data = 1;
  } else {
    for (std::size_t j = 0; j < records.front().size(); ++j) header.push_back(std::to_string(j));
  }
  if (first_data >= records.size()) throw DataError("'" + path + "' has no data rows");
  const std::size_t width = header.size();

  auto column_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
    if (ec == std::errc() && ptr == name.data() + name.size() && idx < width) return idx;
    throw ConfigError("column '" + name + "' not found");
  };

  std::size_t target = 0;
  if (const auto* name = std::get_if<std::string>(&options.target)) {
    target = column_index(*name);
  } else {
    target = std::get<std::size_t>(options.target);
    if (target >= width) throw ConfigError("target column index " + std::to_string(target) + " out of range");
  }

  std::set<std::size_t> dropped;
  for (const auto& name : options.drop_columns) dropped.insert(column_index(name));
  if (dropped.count(target)) throw ConfigError("target column is in the drop list");
  std::set<std::size_t> categorical;
  for (const auto& name : options.categorical_columns) categorical.insert(column_index(name));

  std::vector<std::size_t> feature_cols;
  for (std::size_t j = 0; j < width; ++j)
    if (j != target && !dropped.count(j)) feature_cols.push_back(j);
  if (feature_cols.empty()) throw ConfigError("no feature columns remain");

  auto is_missing = [&](const std::string& cell) {
    return std::find(options.missing_tokens.begin(), options.missing_tokens.end(), cell) !=
           options.missing_tokens.end();
  };

  // Pass 1: shape checks, missing-row filtering, categorical vocabularies.
  std::vector<std::size_t> kept;
  std::map<std::size_t, std::set<std::string>> vocab;
  std::size_t dropped_rows = 0;
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != width) {
      throw DataError("row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                      " cells, expected " + std::to_string(width));
    }
    bool missing = false;
    for (std::size_t j = 0; j < width; ++j) {
      if (dropped.count(j)) continue;
      if (options.drop_missing && is_missing(rec[j])) missing = true;
    }
    if (missing) {
      ++dropped_rows;
      continue;
    }
    kept.push_back(r);
    for (std::size_t j : categorical) vocab[j].insert(rec[j]);
  }
  if (kept.empty()) throw DataError("no rows remain after removing missing values");

  std::map<std::size_t, std::map<std::string, double>> codes;
  for (auto& [j, labels] : vocab) {
    double code = 0;
    for (const auto& label : labels) codes[j][label] = code++;
  }

  auto cell_value = [&](std::size_t r, std::size_t j) {
    const std::string& cell = records[r][j];
    if (categorical.count(j)) return codes[j].at(cell);
    double v = 0;
    if (!parse_double(cell, v)) {
      throw DataError("row " + std::to_string(r + 1) + ", column '" + header[j] + "': cannot parse '" + cell +
                      "' as a number");
    }
    return v;
  };

  std::vector<double> feats;
  std::vector<double> ys;
  feats.reserve(kept.size() * feature_cols.size());
  ys.reserve(kept.size());
  for (std::size_t r : kept) {
    for (std::size_t j : feature_cols) feats.push_back(cell_value(r, j));
    ys.push_back(cell_value(r, target));
  }
  std::vector<std::string> names;
  for (std::size_t j : feature_cols) names.push_back(header[j]);
  return {Dataset(std::move(feats), std::move(ys), std::move(names)), dropped_rows};
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  return load_csv_report(path, options).data;
}

void write_csv(const std::string& path, const Dataset& data, const std::string& response_name) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& name : data.feature_names()) out << name << ',';
  out << response_name << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (double v : data.row(i)) out << format_double(v) << ',';
    out << format_double(data.response(i)) << '\n';
  }
}

double response_variance(const Dataset& data) {
  const auto y = data.responses();
  if (y.size() < 2) return 0.0;
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(y.size() - 1);
}

}  // namespace bcf
