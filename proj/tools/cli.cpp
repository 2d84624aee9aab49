#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "bcforest/dataset.hpp"
#include "bcforest/error.hpp"
#include "bcforest/experiments.hpp"
#include "bcforest/parallel.hpp"
#include "bcforest/report.hpp"
#include "bcforest/simulation.hpp"

namespace bcf::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct CommonFlags {
  std::size_t num_trees = 1000;
  std::size_t shadow_trees = 0;
  std::optional<std::size_t> m;
  bool replacement = false;
  std::string type = "rf";
  std::optional<std::size_t> mtry;
  std::size_t min_leaf = 5;
  std::optional<std::size_t> max_depth;
  std::size_t min_split = 0;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  bool center_residuals = false;
  bool quiet = false;
  std::string out;
};

void add_common(CLI::App& sub, CommonFlags& f, bool shadow_flag = true) {
  sub.add_option("--B", f.num_trees, "Trees in the base ensemble")->check(CLI::PositiveNumber);
  if (shadow_flag) sub.add_option("--Bo", f.shadow_trees, "Shadow (residual bootstrap) trees; default 2*B");
  sub.add_flag("--replacement", f.replacement, "Draw per-tree samples with replacement (default: only when m = n)");
  sub.add_option("--type", f.type, "Tree type: bt (all features per node) or rf (max(p/3,1))")
      ->check(CLI::IsMember({"bt", "rf"}));
  sub.add_option("--mtry", f.mtry, "Features tried per node; overrides --type")->check(CLI::PositiveNumber);
  sub.add_option("--min-leaf", f.min_leaf, "Minimum observations per leaf")->check(CLI::PositiveNumber);
  sub.add_option("--min-split", f.min_split, "Do not split nodes smaller than this (0 = off)");
  sub.add_option("--max-depth", f.max_depth, "Depth cap (default unlimited)");
  sub.add_option("--seed", f.seed, "Master seed");
  sub.add_option("--threads", f.threads, "Worker threads, 0 = auto; never changes results");
  sub.add_flag("--center-residuals", f.center_residuals, "Centre OOB residuals before resampling");
  sub.add_flag("--quiet", f.quiet, "Suppress progress messages");
  sub.add_option("--out", f.out, "Output path prefix");
}

SplitParams split_params(const CommonFlags& f, std::size_t p) {
  SplitParams params = f.type == "bt" ? SplitParams::bagged(p) : SplitParams::random_forest(p);
  if (f.mtry) params.mtry = *f.mtry;
  params.min_leaf = f.min_leaf;
  if (f.max_depth) params.max_depth = *f.max_depth;
  params.min_split = f.min_split;
  params.validate(p);
  return params;
}

ResampleScheme scheme_for(const CommonFlags& f, std::size_t n) {
  const std::size_t m = f.m.value_or(n);
  ResampleScheme scheme{m, f.replacement || m == n};
  scheme.validate(n);
  return scheme;
}

Json common_json(const CommonFlags& f, std::size_t shadow_trees, const SplitParams& params) {
  Json j;
  j["B"] = f.num_trees;
  j["Bo"] = shadow_trees;
  j["mtry"] = params.mtry;
  j["min_leaf"] = params.min_leaf;
  j["min_split"] = params.min_split;
  j["max_depth"] = f.max_depth ? Json(*f.max_depth) : Json(nullptr);
  j["center_residuals"] = f.center_residuals;
  j["seed"] = f.seed;
  return j;
}

ProgressFn progress_to(std::ostream& err, bool quiet) {
  if (quiet) return {};
  return [&err](const std::string& message) { err << message << '\n'; };
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot write '" + path + "'");
  return file;
}

// key=value lines (# comments allowed) become --key=value arguments, placed
// ahead of the command-line flags so explicit flags take precedence.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config file '" + *path + "'");
  auto given = [&](const std::string& key) {
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> from_file;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || given(key)) continue;
    from_file.push_back("--" + key + "=" + value);
  }
  if (rest.empty()) return rest;
  // Subcommand name first, then file values, then explicit flags.
  std::vector<std::string> merged{rest.front()};
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bias-corrected random forests: simulation studies and cross-validation benchmarks", "bcforest"};
  app.require_subcommand(1);

  // simulate
  CommonFlags sim;
  std::string sim_model;
  std::size_t sim_n = 1000;
  std::size_t sim_reps = 100;
  std::size_t sim_n_test = 100;
  double sim_noise = 0.1;
  double sim_test_noise = 0.0;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo bias experiment on a simulated model");
  simulate->add_option("--model", sim_model, "Simulation model")->required()->check(CLI::IsMember(model_names()));
  simulate->add_option("--n", sim_n, "Training observations per replication")->check(CLI::PositiveNumber);
  simulate->add_option("--m", sim.m, "Per-tree sample size (default n)")->check(CLI::PositiveNumber);
  simulate->add_option("--reps", sim_reps, "Replications")->check(CLI::PositiveNumber);
  simulate->add_option("--n-test", sim_n_test, "Fixed test points")->check(CLI::PositiveNumber);
  simulate->add_option("--noise", sim_noise, "Response noise SD (regression models)");
  simulate->add_option("--test-noise", sim_test_noise, "Noise SD added to test targets for Pred Imp");
  add_common(*simulate, sim);

  // cv
  CommonFlags cvf;
  std::string cv_data;
  std::string cv_target;
  bool cv_no_header = false;
  std::vector<std::string> cv_drop;
  std::vector<std::string> cv_categorical;
  bool cv_drop_missing = false;
  std::size_t cv_folds = 10;
  std::string cv_fold_mode = "contiguous";
  std::optional<std::uint64_t> cv_fold_seed;
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of RF and bias-corrected RF on a CSV file");
  cv->add_option("--data", cv_data, "CSV file")->required();
  cv->add_option("--target", cv_target, "Response column (name, or zero-based index)")->required();
  cv->add_flag("--no-header", cv_no_header, "File has no header row");
  cv->add_option("--drop", cv_drop, "Columns to drop");
  cv->add_option("--categorical", cv_categorical, "Columns to integer-encode");
  cv->add_flag("--drop-missing", cv_drop_missing, "Drop rows with missing values instead of failing");
  cv->add_option("--folds", cv_folds, "Fold count")->check(CLI::PositiveNumber);
  cv->add_option("--fold-mode", cv_fold_mode, "contiguous or shuffle")->check(CLI::IsMember({"contiguous", "shuffle"}));
  cv->add_option("--fold-seed", cv_fold_seed, "Seed for shuffled folds (default --seed)");
  cv->add_option("--m", cvf.m, "Per-tree sample size (default: training fold size, bootstrap)");
  add_common(*cv, cvf);

  // figure
  CommonFlags fig;
  fig.type = "bt";
  std::string fig_model = "linear1d";
  std::size_t fig_n = 1000;
  std::vector<std::size_t> fig_m;
  std::size_t fig_reps = 100;
  std::size_t fig_grid = 200;
  double fig_noise = 0.1;
  auto* figure = app.add_subcommand("figure", "Quantile bands of corrected and uncorrected 1-d predictions");
  figure->add_option("--model", fig_model, "One-dimensional regression model")
      ->check(CLI::IsMember({"linear1d", "quad1d"}));
  figure->add_option("--n", fig_n, "Training observations")->check(CLI::PositiveNumber);
  figure->add_option("--m", fig_m, "Subsample sizes (repeatable; default 20 and 200)");
  figure->add_option("--reps", fig_reps, "Replications")->check(CLI::PositiveNumber);
  figure->add_option("--grid", fig_grid, "Grid points on [0,1]");
  figure->add_option("--noise", fig_noise, "Response noise SD");
  add_common(*figure, fig);

  // check-variance
  CommonFlags var;
  var.type = "bt";
  std::string var_model = "sqrt10d";
  std::size_t var_n = 500;
  std::vector<std::size_t> var_bo;
  std::size_t var_repeats = 50;
  std::size_t var_n_test = 20;
  auto* check = app.add_subcommand("check-variance", "Monte-Carlo variance of the correction versus shadow size");
  check->add_option("--model", var_model, "Regression model for the fixed training set")
      ->check(CLI::IsMember({"linear1d", "quad1d", "sqrt10d", "quad10d"}));
  check->add_option("--n", var_n, "Training observations")->check(CLI::PositiveNumber);
  check->add_option("--m", var.m, "Per-tree sample size (default n)");
  check->add_option("--Bo", var_bo, "Shadow sizes to compare (repeatable; default 100 and 200)");
  check->add_option("--repeats", var_repeats, "Shadow rebuilds per size");
  check->add_option("--n-test", var_n_test, "Test points")->check(CLI::PositiveNumber);
  var.num_trees = 100;
  add_common(*check, var, false);

  try {
    std::vector<std::string> args = merge_config_file(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (simulate->parsed()) {
      set_thread_count(sim.threads);
      ExperimentConfig config;
      config.model = parse_model(sim_model, sim_noise);
      config.n = sim_n;
      config.num_trees = sim.num_trees;
      config.shadow_trees = sim.shadow_trees == 0 ? 2 * sim.num_trees : sim.shadow_trees;
      config.scheme = scheme_for(sim, sim_n);
      config.params = split_params(sim, config.model.dimension());
      config.reps = sim_reps;
      config.n_test = sim_n_test;
      config.rng = RngSpec{sim.seed};
      config.center_residuals = sim.center_residuals;
      config.test_noise_sd = sim_test_noise;
      config.progress = progress_to(err, sim.quiet);

      Json cfg;
      cfg["command"] = "simulate";
      cfg["model"] = sim_model;
      cfg["noise"] = sim_noise;
      cfg["n"] = sim_n;
      cfg["m"] = config.scheme.m;
      cfg["replacement"] = config.scheme.replacement;
      cfg["reps"] = sim_reps;
      cfg["n_test"] = sim_n_test;
      cfg["test_noise"] = sim_test_noise;
      cfg.update(common_json(sim, config.shadow_trees, config.params));

      const auto result = config.model.is_classification() ? run_classification_experiment(config)
                                                           : run_bias_experiment(config);
      const Json summary = metric_json(result.report, cfg);
      const std::string prefix = sim.out.empty() ? "simulate" : sim.out;
      {
        auto csv = open_output(prefix + ".csv");
        write_metric_csv(csv, result.report, cfg);
      }
      {
        auto json = open_output(prefix + ".json");
        json << summary.dump(2) << '\n';
      }
      out << summary.dump(2) << '\n';
      return kSuccess;
    }

    if (cv->parsed()) {
      set_thread_count(cvf.threads);
      CsvOptions options;
      options.header = !cv_no_header;
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(cv_target.data(), cv_target.data() + cv_target.size(), index);
      if (ec == std::errc() && ptr == cv_target.data() + cv_target.size() && cv_no_header) {
        options.target = index;
      } else {
        options.target = cv_target;
      }
      options.drop_columns = cv_drop;
      options.categorical_columns = cv_categorical;
      options.drop_missing = cv_drop_missing;
      const auto loaded = load_csv_report(cv_data, options);
      if (loaded.dropped_rows > 0 && !cvf.quiet) {
        err << "dropped " << loaded.dropped_rows << " rows with missing values\n";
      }
      const Dataset& data = loaded.data;

      CvConfig config;
      config.folds = cv_folds;
      config.mode = cv_fold_mode == "shuffle" ? FoldMode::kSeededShuffle : FoldMode::kContiguous;
      config.fold_seed = cv_fold_seed.value_or(cvf.seed);
      config.num_trees = cvf.num_trees;
      config.shadow_trees = cvf.shadow_trees == 0 ? 2 * cvf.num_trees : cvf.shadow_trees;
      config.m = cvf.m.value_or(0);
      config.replacement = cvf.m ? cvf.replacement : true;
      config.params = split_params(cvf, data.p());
      config.rng = RngSpec{cvf.seed};
      config.center_residuals = cvf.center_residuals;
      config.progress = progress_to(err, cvf.quiet);

      Json cfg;
      cfg["command"] = "cv";
      cfg["data"] = cv_data;
      cfg["target"] = cv_target;
      cfg["n"] = data.n();
      cfg["p"] = data.p();
      cfg["dropped_missing_rows"] = loaded.dropped_rows;
      cfg["folds"] = cv_folds;
      cfg["fold_mode"] = cv_fold_mode;
      cfg["fold_seed"] = config.fold_seed;
      cfg["m"] = config.m == 0 ? Json("train-size") : Json(config.m);
      cfg["replacement"] = config.replacement;
      cfg.update(common_json(cvf, config.shadow_trees, *config.params));

      const CvResult result = run_cv(data, config);
      if (!cvf.out.empty()) {
        auto csv = open_output(cvf.out + ".csv");
        write_cv_csv(csv, result, cfg);
      }
      write_cv_csv(out, result, cfg);
      return kSuccess;
    }

    if (figure->parsed()) {
      set_thread_count(fig.threads);
      FigureConfig config;
      config.model = parse_model(fig_model, fig_noise);
      config.n = fig_n;
      config.num_trees = fig.num_trees;
      config.shadow_trees = fig.shadow_trees == 0 ? 2 * fig.num_trees : fig.shadow_trees;
      config.m_list = fig_m.empty() ? std::vector<std::size_t>{20, 200} : fig_m;
      config.reps = fig_reps;
      config.grid_points = fig_grid;
      config.params = split_params(fig, 1);
      config.rng = RngSpec{fig.seed};
      config.center_residuals = fig.center_residuals;
      config.progress = progress_to(err, fig.quiet);

      Json cfg;
      cfg["command"] = "figure";
      cfg["model"] = fig_model;
      cfg["noise"] = fig_noise;
      cfg["n"] = fig_n;
      cfg["m"] = config.m_list;
      cfg["reps"] = fig_reps;
      cfg["grid"] = fig_grid;
      cfg.update(common_json(fig, config.shadow_trees, config.params));

      const FigureTable table = emit_figure_data(config);
      const std::string prefix = fig.out.empty() ? "figure" : fig.out;
      Json files = Json::array();
      for (std::size_t m : config.m_list) {
        const std::string path = prefix + "_m" + std::to_string(m) + ".csv";
        auto csv = open_output(path);
        write_figure_csv(csv, table.for_m(m), cfg);
        files.push_back(path);
      }
      Json summary;
      summary["config"] = cfg;
      summary["files"] = files;
      out << summary.dump(2) << '\n';
      return kSuccess;
    }

    if (check->parsed()) {
      set_thread_count(var.threads);
      if (var_bo.empty()) var_bo = {100, 200};
      const SimModel model = parse_model(var_model);
      const RngSpec rng{var.seed};
      auto data_stream = derive_stream(rng, StreamRole::kTrainingData, 0);
      const Dataset data = generate(model, var_n, data_stream);
      auto test_stream = derive_stream(rng, StreamRole::kTestSet, 0);
      const auto test_points = draw_inputs(model, var_n_test, test_stream);
      const SplitParams params = split_params(var, model.dimension());
      const ResampleScheme scheme = scheme_for(var, var_n);
      const Ensemble base = fit_ensemble(data, var.num_trees, scheme, params, rng);
      const VarianceTable table = variance_scaling_check(data, base, var_bo, var_repeats, test_points, rng,
                                                         Execution::kParallel, progress_to(err, var.quiet));

      Json cfg;
      cfg["command"] = "check-variance";
      cfg["model"] = var_model;
      cfg["n"] = var_n;
      cfg["m"] = scheme.m;
      cfg["replacement"] = scheme.replacement;
      cfg["Bo"] = var_bo;
      cfg["repeats"] = var_repeats;
      cfg["n_test"] = var_n_test;
      Json common = common_json(var, 0, params);
      common.erase("Bo");
      cfg.update(common);

      if (!var.out.empty()) {
        auto csv = open_output(var.out + ".csv");
        write_variance_csv(csv, table, cfg);
      }
      write_variance_csv(out, table, cfg);
      return kSuccess;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace bcf::cli
