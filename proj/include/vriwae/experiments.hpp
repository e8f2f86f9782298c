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

#ifndef VRIWAE_EXPERIMENTS_HPP
#define VRIWAE_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vriwae/gradients.hpp"
#include "vriwae/models.hpp"
#include "vriwae/table.hpp"
#include "vriwae/train.hpp"

/**
 * \file
 * \brief Experiment drivers that turn a spec into result tables.
 *
 * Every driver is a pure function of the spec (seed included): each grid cell
 * draws from its own stream id, so the output does not depend on thread count
 * or on which other cells are present.
 */

namespace vriwae {

enum class ExperimentKind { kGap, kSnr, kWeights, kCollapse, kTrain, kFit, kSelftest };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kGap;
  ModelKind model = ModelKind::kToy;
  std::vector<double> alphas{0.0, 0.2, 0.5};
  std::vector<std::size_t> dims{10, 100, 1000};
  std::vector<std::size_t> n_grid{2, 4, 8, 16, 32, 64, 128, 256, 512};
  std::size_t replicates = 1000;
  /// Draws per histogram in the weights experiment.
  std::size_t weight_samples = 100000;
  std::uint64_t seed = 0;
  /// Linear Gaussian perturbation scales; ignored by the toy.
  std::vector<double> sigma_perturb{0.0};
  /// Toy: theta = theta_scale * u_d, phi = u_d.
  double theta_scale = 0.0;
  std::vector<EstimatorKind> estimators{EstimatorKind::kRep, EstimatorKind::kDrep};
  std::size_t m = 1;
  std::size_t coordinate_sample = kDefaultSnrCoordinates;
  std::size_t histogram_bins = 50;
  std::size_t dataset_size = kDefaultDatasetSize;
  /// Settings for `train`, which uses dims[0] for the model dimension.
  TrainConfig train{};

  std::string out;
  OutputFormat format = OutputFormat::kCsv;
  std::string plot;
  /// Input table for `fit`.
  std::string input;

  /// Throws std::invalid_argument on an empty or unsorted grid, alpha outside
  /// [0, 1], zero replicates or zero dimension.
  void validate() const;
};

nlohmann::ordered_json to_json(const ExperimentSpec& spec);
/// Fields absent from `json` keep their values from `base`.
ExperimentSpec spec_from_json(const nlohmann::json& json, ExperimentSpec base = {});

/// Metadata lines (schema version, kind, seed, spec echo) for a result table.
void stamp_metadata(Table& table, const ExperimentSpec& spec);

/// Gap against N with the three predicted curves and fitted constants.
/// Columns: model, sigma_perturb, alpha, d, N, replicates, mean_gap, se_gap,
/// mean_bound, log_marginal, error_term, gamma2, bd, a_const, sigma2,
/// pred_thm3, pred_thm3_fit, c1, rms_thm3, asym_family, pred_asym, c2, rms_asym, rel_rms_asym.
Table run_gap_experiment(const ExperimentSpec& spec);

/// SNR against N for both parameter blocks.
/// Columns: model, sigma_perturb, estimator, alpha, d, M, N, block, snr_mean,
/// slope, slope_lo, slope_hi, ref_slope.
Table run_snr_experiment(const ExperimentSpec& spec);

struct WeightsResult {
  /// model, sigma_perturb, d, samples, log_mean, log_std, qq_corr, log_min, log_max
  Table summary;
  /// model, sigma_perturb, d, bin, lo, hi, count
  Table histogram;
};

/// Log relative weights from full d-dimensional draws.
WeightsResult run_weights_experiment(const ExperimentSpec& spec);

/// Columns: model, sigma_perturb, alpha, d, N, replicates, t_mean, t_se,
/// max_share_mean, max_share_se, ess_mean, ess_se.
Table run_collapse_experiment(const ExperimentSpec& spec);

/// Columns: epoch, bd2_over_d (toy) or lambda (linear Gaussian), gap_mean,
/// gap_se, grad_norm.
Table run_train_experiment(const ExperimentSpec& spec);

/// Refits the asymptotic constants of a gap table.
/// Columns: model, sigma_perturb, alpha, d, family, constant, rms, rel_rms, points.
Table fit_gap_table(const Table& gap);

/// The model instance used for one (d, sigma_perturb) cell of a spec.
Model experiment_model(const ExperimentSpec& spec, std::size_t d, double sigma_perturb);

}  // namespace vriwae

#endif  // VRIWAE_EXPERIMENTS_HPP
