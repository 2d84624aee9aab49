#include "bcforest/serialize.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, ptr);
}

double parse_hex(const std::string& token) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v, std::chars_format::hex);
  if (ec != std::errc() || ptr != token.data() + token.size()) throw DataError("bad real '" + token + "' in model file");
  return v;
}

void expect(std::istream& in, const std::string& word) {
  std::string token;
  if (!(in >> token) || token != word) {
    throw DataError("model file: expected '" + word + "', found '" + token + "'");
  }
}

template <class T>
T read(std::istream& in) {
  T v{};
  if (!(in >> v)) throw DataError("model file truncated");
  return v;
}

double read_real(std::istream& in) { return parse_hex(read<std::string>(in)); }

void save_reals(std::ostream& out, const char* tag, const std::vector<double>& values) {
  out << tag << ' ' << values.size();
  for (double v : values) out << ' ' << hex(v);
  out << '\n';
}

std::vector<double> load_reals(std::istream& in, const std::string& tag) {
  expect(in, tag);
  std::vector<double> values(read<std::size_t>(in));
  for (double& v : values) v = read_real(in);
  return values;
}

}  // namespace

void save_ensemble(std::ostream& out, const Ensemble& ensemble) {
  out << "bcforest-ensemble " << kVersion << '\n';
  out << "scheme " << ensemble.scheme().m << ' ' << (ensemble.scheme().replacement ? 1 : 0) << '\n';
  const SplitParams& params = ensemble.split_params();
  out << "params " << params.min_leaf << ' ' << params.mtry << ' ' << params.max_depth << ' ' << params.min_split
      << '\n';
  out << "trees " << ensemble.size() << ' ' << ensemble.num_features() << '\n';
  for (const Tree& tree : ensemble.trees()) {
    out << "tree " << tree.nodes().size() << ' ' << tree.in_bag().size() << '\n';
    for (const TreeNode& node : tree.nodes()) {
      out << node.feature << ' ' << node.left << ' ' << node.right << ' ' << hex(node.threshold) << ' '
          << hex(node.value) << ' ' << node.count << '\n';
    }
    out << "inbag";
    for (std::uint32_t r : tree.in_bag()) out << ' ' << r;
    out << '\n';
  }
}

Ensemble load_ensemble(std::istream& in) {
  expect(in, "bcforest-ensemble");
  if (read<int>(in) != kVersion) throw DataError("unsupported ensemble format version");
  expect(in, "scheme");
  ResampleScheme scheme;
  scheme.m = read<std::size_t>(in);
  scheme.replacement = read<int>(in) != 0;
  expect(in, "params");
  SplitParams params;
  params.min_leaf = read<std::size_t>(in);
  params.mtry = read<std::size_t>(in);
  params.max_depth = read<std::size_t>(in);
  params.min_split = read<std::size_t>(in);
  expect(in, "trees");
  const auto count = read<std::size_t>(in);
  const auto p = read<std::size_t>(in);
  std::vector<Tree> trees;
  trees.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    expect(in, "tree");
    std::vector<TreeNode> nodes(read<std::size_t>(in));
    std::vector<std::uint32_t> in_bag(read<std::size_t>(in));
    for (TreeNode& node : nodes) {
      node.feature = read<std::int32_t>(in);
      node.left = read<std::int32_t>(in);
      node.right = read<std::int32_t>(in);
      node.threshold = read_real(in);
      node.value = read_real(in);
      node.count = read<std::uint32_t>(in);
      const auto limit = static_cast<std::int32_t>(nodes.size());
      if (node.feature >= static_cast<std::int32_t>(p) ||
          (node.feature >= 0 && (node.left <= 0 || node.left >= limit || node.right <= 0 || node.right >= limit))) {
        throw DataError("model file: corrupt node");
      }
    }
    expect(in, "inbag");
    for (auto& r : in_bag) r = read<std::uint32_t>(in);
    trees.emplace_back(std::move(nodes), std::move(in_bag), p);
  }
  return Ensemble(std::move(trees), scheme, params);
}

void save_model(std::ostream& out, const CorrectedModel& model) {
  out << "bcforest-corrected " << kVersion << '\n';
  out << "kind " << (model.kind() == CorrectionKind::kClassification ? "classification" : "regression") << '\n';
  out << "excluded " << model.excluded_count() << '\n';
  save_reals(out, "residual_pool", model.residual_pool());
  save_reals(out, "fitted_values", model.fitted_values());
  save_ensemble(out, model.base());
  save_ensemble(out, model.shadow());
}

CorrectedModel load_model(std::istream& in) {
  expect(in, "bcforest-corrected");
  if (read<int>(in) != kVersion) throw DataError("unsupported model format version");
  expect(in, "kind");
  const auto kind_name = read<std::string>(in);
  CorrectionKind kind;
  if (kind_name == "regression") {
    kind = CorrectionKind::kRegression;
  } else if (kind_name == "classification") {
    kind = CorrectionKind::kClassification;
  } else {
    throw DataError("model file: unknown kind '" + kind_name + "'");
  }
  expect(in, "excluded");
  const auto excluded = read<std::size_t>(in);
  auto pool = load_reals(in, "residual_pool");
  auto fitted = load_reals(in, "fitted_values");
  auto base = load_ensemble(in);
  auto shadow = load_ensemble(in);
  return CorrectedModel(std::move(base), std::move(shadow), std::move(pool), std::move(fitted), kind, excluded);
}

void save_model(const std::string& path, const CorrectedModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  save_model(out, model);
}

CorrectedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_model(in);
}

}  // namespace bcf
