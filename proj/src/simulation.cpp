#include "bcforest/simulation.hpp"

#include <cmath>

#include "bcforest/error.hpp"

namespace bcf {

namespace {

constexpr std::size_t kHighDim = 10;
// x_j = sqrt(0.8) z_0 + z_j gives Var(x_j) = 1.8 and Cov(x_j, x_k) = 0.8.
const double kSharedLoading = std::sqrt(0.8);

struct ModelEntry {
  ModelKind kind;
  const char* name;
};

constexpr ModelEntry kModels[] = {
    {ModelKind::kLinear1d, "linear1d"},           {ModelKind::kQuad1d, "quad1d"},
    {ModelKind::kSqrt10d, "sqrt10d"},             {ModelKind::kQuad10d, "quad10d"},
    {ModelKind::kLogitLinear1d, "logit-linear1d"}, {ModelKind::kLogitQuad1d, "logit-quad1d"},
    {ModelKind::kLogitSqrt10d, "logit-sqrt10d"},   {ModelKind::kLogitQuad10d, "logit-quad10d"},
};

void check_point(const SimModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw UsageError("model " + model.name() + " expects a " + std::to_string(model.dimension()) +
                     "-dimensional point, got " + std::to_string(x.size()));
  }
}

double abs_sum(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += std::fabs(v);
  return s;
}

double square_sum(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

Dataset finish(const SimModel& model, std::size_t n, std::vector<double> inputs, RandomStream& rng) {
  const std::size_t p = model.dimension();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> x(inputs.data() + i * p, p);
    if (model.is_classification()) {
      y[i] = rng.bernoulli(true_prob(model, x)) ? 1.0 : 0.0;
    } else {
      y[i] = true_mean(model, x) + model.noise_sd * rng.normal();
    }
  }
  return Dataset(std::move(inputs), std::move(y), p);
}

}  // namespace

std::size_t SimModel::dimension() const {
  switch (kind) {
    case ModelKind::kSqrt10d:
    case ModelKind::kQuad10d:
    case ModelKind::kLogitSqrt10d:
    case ModelKind::kLogitQuad10d:
      return kHighDim;
    default:
      return 1;
  }
}

bool SimModel::is_classification() const {
  switch (kind) {
    case ModelKind::kLogitLinear1d:
    case ModelKind::kLogitQuad1d:
    case ModelKind::kLogitSqrt10d:
    case ModelKind::kLogitQuad10d:
      return true;
    default:
      return false;
  }
}

std::string SimModel::name() const {
  for (const auto& entry : kModels)
    if (entry.kind == kind) return entry.name;
  return "unknown";
}

SimModel parse_model(const std::string& name, double noise_sd) {
  for (const auto& entry : kModels)
    if (name == entry.name) return SimModel{entry.kind, noise_sd};
  throw ConfigError("unknown model '" + name + "'");
}

std::vector<std::string> model_names() {
  std::vector<std::string> names;
  for (const auto& entry : kModels) names.emplace_back(entry.name);
  return names;
}

double true_mean(const SimModel& model, std::span<const double> x) {
  check_point(model, x);
  switch (model.kind) {
    case ModelKind::kLinear1d:
      return x[0];
    case ModelKind::kQuad1d:
      return -(x[0] - 0.5) * (x[0] - 0.5);
    case ModelKind::kSqrt10d:
      return std::sqrt(abs_sum(x) / 10.0);
    case ModelKind::kQuad10d:
      return -square_sum(x) / 10.0;
    default:
      throw UsageError("true_mean is defined for regression models only; " + model.name() + " is a classification model");
  }
}

double true_logit(const SimModel& model, std::span<const double> x) {
  check_point(model, x);
  switch (model.kind) {
    case ModelKind::kLogitLinear1d:
      return 3.0 * (x[0] - 0.5);
    case ModelKind::kLogitQuad1d:
      return -30.0 * (x[0] - 0.5) * (x[0] - 0.5) - 2.17;
    case ModelKind::kLogitSqrt10d:
      return 5.0 * std::sqrt(abs_sum(x)) - 5.0;
    case ModelKind::kLogitQuad10d:
      return -2.0 * square_sum(x) + 2.4;
    default:
      throw UsageError("true_prob is defined for classification models only; " + model.name() + " is a regression model");
  }
}

double true_prob(const SimModel& model, std::span<const double> x) {
  return 1.0 / (1.0 + std::exp(-true_logit(model, x)));
}

double true_target(const SimModel& model, std::span<const double> x) {
  return model.is_classification() ? true_prob(model, x) : true_mean(model, x);
}

std::vector<double> draw_inputs(const SimModel& model, std::size_t n, RandomStream& rng) {
  const std::size_t p = model.dimension();
  std::vector<double> x(n * p);
  if (p == 1) {
    for (double& v : x) v = rng.uniform();
    return x;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double shared = kSharedLoading * rng.normal();
    for (std::size_t j = 0; j < p; ++j) x[i * p + j] = shared + rng.normal();
  }
  return x;
}

Dataset gen_1d(const SimModel& model, std::size_t n, RandomStream& rng) {
  if (model.dimension() != 1) throw UsageError("gen_1d: " + model.name() + " is not a one-dimensional model");
  if (n == 0) throw ConfigError("sample size must be positive");
  return finish(model, n, draw_inputs(model, n, rng), rng);
}

Dataset gen_10d(const SimModel& model, std::size_t n, RandomStream& rng) {
  if (model.dimension() != kHighDim) throw UsageError("gen_10d: " + model.name() + " is not a ten-dimensional model");
  if (n == 0) throw ConfigError("sample size must be positive");
  return finish(model, n, draw_inputs(model, n, rng), rng);
}

Dataset generate(const SimModel& model, std::size_t n, RandomStream& rng) {
  return model.dimension() == 1 ? gen_1d(model, n, rng) : gen_10d(model, n, rng);
}

}  // namespace bcf
