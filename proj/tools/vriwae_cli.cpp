// Copyright 2026 The vriwae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the experiment drivers.
//
//   vriwae gap --model toy --d 1000 --alpha 0,0.2,0.5 --out gap.csv --plot gap.svg
//   vriwae fit --input gap.csv --format json
//   vriwae selftest

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vriwae/experiments.hpp"
#include "vriwae/selftest.hpp"
#include "vriwae/svg.hpp"
#include "vriwae/table.hpp"

namespace {

using vriwae::ExperimentKind;
using vriwae::ExperimentSpec;

struct SharedFlags {
  std::string config;
  std::string model;
  std::vector<double> alphas;
  std::vector<std::size_t> dims;
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> sigma_perturb;
  double theta_scale = 0.0;
  std::vector<std::string> estimators;
  std::string out;
  std::string format;
  std::string plot;

  // Options whose presence overrides the spec defaults and config file.
  std::vector<CLI::Option*> options;
};

struct TrainFlags {
  std::size_t epochs = 0;
  double lr = 0.0;
  std::string optimizer;
  std::size_t n = 0;
  std::size_t log_every = 0;
  bool train_theta = false;
};

void add_shared(CLI::App* app, SharedFlags& f) {
  f.options = {
      app->add_option("--model", f.model, "toy | lingauss"),
      app->add_option("--alpha", f.alphas, "alpha values, comma separated")->delimiter(','),
      app->add_option("--d", f.dims, "latent dimensions, comma separated")->delimiter(','),
      app->add_option("--n-grid", f.n_grid, "importance sample sizes, comma separated")
          ->delimiter(','),
      app->add_option("--replicates", f.replicates, "Monte Carlo replicates per cell"),
      app->add_option("--seed", f.seed, "master seed (default 0)"),
      app->add_option("--sigma-perturb", f.sigma_perturb,
                      "linear Gaussian perturbation scales, comma separated")
          ->delimiter(','),
      app->add_option("--theta-scale", f.theta_scale, "toy: theta = s * u, phi = u"),
      app->add_option("--estimator", f.estimators, "rep, drep or both")->delimiter(','),
      app->add_option("--out", f.out, "output path (stdout when omitted)"),
      app->add_option("--format", f.format, "csv | json"),
      app->add_option("--plot", f.plot, "optional SVG output path"),
  };
  app->add_option("--config", f.config, "JSON file with ExperimentSpec fields");
}

ExperimentSpec build_spec(ExperimentKind kind, const SharedFlags& f) {
  ExperimentSpec spec;
  spec.kind = kind;
  if (kind == ExperimentKind::kTrain) spec.dims = {1000};
  if (!f.config.empty()) {
    std::ifstream in{f.config};
    if (!in) throw std::runtime_error("cannot open config '" + f.config + "'");
    spec = vriwae::spec_from_json(nlohmann::json::parse(in), spec);
    spec.kind = kind;
  }
  const auto given = [&](std::size_t i) { return f.options[i]->count() > 0; };
  if (given(0)) spec.model = vriwae::parse_model_kind(f.model);
  if (given(1)) spec.alphas = f.alphas;
  if (given(2)) spec.dims = f.dims;
  if (given(3)) spec.n_grid = f.n_grid;
  if (given(4)) spec.replicates = f.replicates;
  if (given(5)) spec.seed = f.seed;
  if (given(6)) spec.sigma_perturb = f.sigma_perturb;
  if (given(7)) spec.theta_scale = f.theta_scale;
  if (given(8)) {
    spec.estimators.clear();
    for (const auto& e : f.estimators) spec.estimators.push_back(vriwae::parse_estimator_kind(e));
  }
  if (given(9)) spec.out = f.out;
  if (given(10)) spec.format = vriwae::parse_output_format(f.format);
  if (given(11)) spec.plot = f.plot;
  return spec;
}

void emit(const vriwae::Table& table, const ExperimentSpec& spec, const std::string& path) {
  if (path.empty()) {
    if (spec.format == vriwae::OutputFormat::kCsv) {
      vriwae::write_csv(table, std::cout);
    } else {
      std::cout << vriwae::to_json(table).dump(2) << '\n';
    }
    return;
  }
  vriwae::write_table(table, path, spec.format);
}

std::string sibling(const std::string& path, const std::string& suffix) {
  if (path.empty()) return path;
  const std::filesystem::path p{path};
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void plot(const vriwae::Table& table, const ExperimentSpec& spec, const std::string& x,
          const std::vector<std::string>& ys, const std::string& group, bool log_x) {
  if (spec.plot.empty()) return;
  vriwae::SvgOptions options;
  options.group_by = group;
  options.log_x = log_x;
  options.title = std::string{vriwae::to_string(spec.kind)} + " (" +
                  std::string{vriwae::to_string(spec.model)} + ")";
  vriwae::render_svg(table, x, ys, std::filesystem::path{spec.plot}, options);
}

int run(ExperimentKind kind, const SharedFlags& flags, const TrainFlags& train, CLI::App* train_cmd,
        const std::string& fit_input, std::size_t bins) {
  ExperimentSpec spec = build_spec(kind, flags);
  switch (kind) {
    case ExperimentKind::kGap: {
      const auto table = vriwae::run_gap_experiment(spec);
      emit(table, spec, spec.out);
      plot(table, spec, "N", {"mean_gap", "pred_thm3", "pred_asym"}, "alpha", true);
      break;
    }
    case ExperimentKind::kSnr: {
      const auto table = vriwae::run_snr_experiment(spec);
      emit(table, spec, spec.out);
      plot(table, spec, "N", {"snr_mean"}, "block", true);
      break;
    }
    case ExperimentKind::kWeights: {
      if (bins > 0) spec.histogram_bins = bins;
      if (flags.options[4]->count() > 0) spec.weight_samples = spec.replicates;
      const auto result = vriwae::run_weights_experiment(spec);
      emit(result.summary, spec, spec.out);
      if (!spec.out.empty()) emit(result.histogram, spec, sibling(spec.out, "_hist"));
      plot(result.histogram, spec, "lo", {"count"}, "d", false);
      break;
    }
    case ExperimentKind::kCollapse: {
      const auto table = vriwae::run_collapse_experiment(spec);
      emit(table, spec, spec.out);
      plot(table, spec, "N", {"t_mean", "max_share_mean"}, "d", true);
      break;
    }
    case ExperimentKind::kTrain: {
      if (flags.options[1]->count() > 0) spec.train.alpha = spec.alphas.front();
      if (flags.options[8]->count() > 0) spec.train.estimator = spec.estimators.front();
      if (train_cmd->get_option("--epochs")->count() > 0) spec.train.epochs = train.epochs;
      if (train_cmd->get_option("--lr")->count() > 0) spec.train.learning_rate = train.lr;
      if (train_cmd->get_option("--optimizer")->count() > 0) {
        spec.train.optimizer = vriwae::parse_optimizer_kind(train.optimizer);
        if (train_cmd->get_option("--lr")->count() == 0 &&
            spec.train.optimizer == vriwae::OptimizerKind::kAdam) {
          spec.train.learning_rate = vriwae::kDefaultAdamLearningRate;
        }
      }
      if (train_cmd->get_option("--n")->count() > 0) spec.train.n_importance = train.n;
      if (train_cmd->get_option("--log-every")->count() > 0) spec.train.log_every = train.log_every;
      if (train.train_theta) spec.train.train_theta = true;
      const auto table = vriwae::run_train_experiment(spec);
      emit(table, spec, spec.out);
      plot(table, spec, "epoch", {table.columns()[1]}, "", false);
      break;
    }
    case ExperimentKind::kFit: {
      const std::string input = fit_input.empty() ? spec.input : fit_input;
      if (input.empty()) throw std::invalid_argument("fit: --input is required");
      const auto table = vriwae::fit_gap_table(vriwae::read_csv_file(input));
      emit(table, spec, spec.out);
      break;
    }
    case ExperimentKind::kSelftest:
      break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VR-IWAE bound experiments"};
  app.require_subcommand(1);

  TrainFlags train;
  std::string fit_input;
  std::size_t bins = 0;
  std::uint64_t selftest_seed = 0;
  double selftest_scale = 1.0;

  auto* gap = app.add_subcommand("gap", "gap against N with predicted curves");
  auto* snr = app.add_subcommand("snr", "gradient SNR against N");
  auto* weights = app.add_subcommand("weights", "log-weight histograms and QQ correlation");
  auto* collapse = app.add_subcommand("collapse", "T statistic, max share and ESS");
  auto* train_cmd = app.add_subcommand("train", "stochastic gradient training trajectory");
  auto* fit = app.add_subcommand("fit", "refit asymptotic constants of a gap table");
  auto* selftest = app.add_subcommand("selftest", "invariant and oracle checks");

  // CLI11 options bind to one command each, so every experiment command gets
  // its own copy of the shared flags.
  std::vector<SharedFlags> per_command(6);
  const std::vector<std::pair<CLI::App*, ExperimentKind>> commands = {
      {gap, ExperimentKind::kGap},          {snr, ExperimentKind::kSnr},
      {weights, ExperimentKind::kWeights},  {collapse, ExperimentKind::kCollapse},
      {train_cmd, ExperimentKind::kTrain},  {fit, ExperimentKind::kFit}};
  for (std::size_t i = 0; i < commands.size(); ++i) add_shared(commands[i].first, per_command[i]);

  weights->add_option("--bins", bins, "histogram bins (default 50)");
  train_cmd->add_option("--epochs", train.epochs, "training steps (default 5000)");
  train_cmd->add_option("--lr", train.lr, "learning rate (default 1e-2 sgd, 1e-3 adam)");
  train_cmd->add_option("--optimizer", train.optimizer, "sgd | adam");
  train_cmd->add_option("--n", train.n, "importance samples per step (default 100)");
  train_cmd->add_option("--log-every", train.log_every, "logging interval (default 100)");
  train_cmd->add_flag("--train-theta", train.train_theta, "also update theta");
  fit->add_option("--input", fit_input, "gap table (CSV) to refit");
  selftest->add_option("--seed", selftest_seed, "seed for the randomized checks");
  selftest->add_option("--scale", selftest_scale, "replicate multiplier (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      vriwae::SelftestOptions options;
      options.seed = selftest_seed;
      options.scale = selftest_scale;
      const auto report = vriwae::run_selftest(options);
      report.print(std::cout);
      return report.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
    }
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (commands[i].first->parsed()) {
        return run(commands[i].second, per_command[i], train, train_cmd, fit_input, bins);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
