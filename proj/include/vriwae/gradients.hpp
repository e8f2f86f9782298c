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

#ifndef VRIWAE_GRADIENTS_HPP
#define VRIWAE_GRADIENTS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "vriwae/asymptotics.hpp"
#include "vriwae/models.hpp"
#include "vriwae/parallel.hpp"
#include "vriwae/rng.hpp"

/**
 * \file
 * \brief Reparameterized (rep) and doubly-reparameterized (drep) gradient
 * estimators of the VR-IWAE bound, with a finite-difference oracle and the
 * SNR / MSE harnesses.
 *
 * With s = softmax((1 - alpha) log w) over one batch of N samples:
 *
 *   rep:  grad = sum_j s_j * d/dparam log w(f(eps_j, phi))
 *   drep: grad_phi = sum_j h_j * (path-only derivative)_j,
 *         h_j = alpha s_j + (1 - alpha) s_j^2
 *
 * The theta gradient is the same for both estimators. Replicate r of a sweep
 * cell always draws from its own substream, so rep, drep and the
 * finite-difference oracle can share draws (common random numbers).
 */

namespace vriwae {

enum class EstimatorKind { kRep, kDrep };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

struct GradientSample {
  std::vector<double> grad_theta;
  std::vector<double> grad_phi;
  double alpha = 0.0;
  std::size_t n_importance = 0;
  EstimatorKind estimator_kind = EstimatorKind::kRep;
};

/// Both estimators computed from one set of draws.
struct GradientPair {
  std::vector<double> grad_theta;
  std::vector<double> rep_phi;
  std::vector<double> drep_phi;
};

/// h_j = alpha s_j + (1 - alpha) s_j^2. `s` must be a probability vector
/// (entries >= 0, sum within 1e-10 of 1).
void h_coefficients(std::span<const double> s, double alpha, std::span<double> out);
std::vector<double> h_coefficients(std::span<const double> s, double alpha);

/// Replaceable coefficient rule for the drep estimator (used to check that the
/// unbiasedness harness detects a wrong rule).
using HCoefficientFn =
    std::function<void(std::span<const double> s, double alpha, std::span<double> out)>;

/// delta_{M,N}: the average of M independent single-batch estimates.
GradientPair gradient_pair_sample(const Model& model, double alpha, std::size_t n,
                                  RngStream& stream, std::size_t m = 1,
                                  const HCoefficientFn& h_rule = {});

GradientSample rep_grad_sample(const Model& model, double alpha, std::size_t n, RngStream& stream);
GradientSample drep_grad_sample(const Model& model, double alpha, std::size_t n,
                                RngStream& stream);

/// Replicate mean and standard error of a flattened [theta, phi] gradient.
struct GradientEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t replicates = 0;
};

struct EstimatorMeans {
  GradientEstimate rep;
  GradientEstimate drep;
};

/// Replicate r uses stream.substream(r); with m = 1 its draws coincide with
/// those of fd_grad_oracle on the same stream.
EstimatorMeans gradient_means(const Model& model, double alpha, std::size_t n,
                              std::size_t replicates, const RngStream& stream,
                              Execution execution = default_execution(),
                              const HCoefficientFn& h_rule = {});

inline constexpr double kDefaultFdStep = 1e-3;

/// Central finite differences of the per-replicate bound estimate in every
/// flattened parameter, holding the base draws eps fixed at params +- step.
GradientEstimate fd_grad_oracle(const Model& model, double alpha, std::size_t n, double step,
                                std::size_t replicates, const RngStream& stream,
                                Execution execution = default_execution());

/// Central difference gradient of a scalar function.
std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double step);

/// SNR results for one parameter block of one estimator.
struct SnrBlock {
  std::vector<std::size_t> coordinates;  ///< sampled indices within the block
  /// per_coordinate[k][c]: |mean| / std at n_grid[k]; +inf for zero variance.
  std::vector<std::vector<double>> per_coordinate;
  /// Average over the finite per-coordinate entries at each N.
  std::vector<double> snr_mean;
  SlopeFit fit;  ///< log(snr_mean) against log N, finite entries only
};

struct SnrReport {
  EstimatorKind estimator_kind = EstimatorKind::kRep;
  std::size_t m = 1;
  std::vector<std::size_t> n_grid;
  SnrBlock theta;
  SnrBlock phi;
};

struct SnrSweep {
  SnrReport rep;
  SnrReport drep;
};

/// One replicate of both estimators at N importance samples.
using GradientSampler = std::function<GradientPair(std::size_t n, RngStream& stream)>;

inline constexpr std::size_t kDefaultSnrCoordinates = 10;

SnrSweep snr_sweep(const Model& model, double alpha, std::size_t m,
                   std::span<const std::size_t> n_grid, std::size_t replicates,
                   std::size_t coordinate_sample, const RngStream& stream,
                   Execution execution = default_execution());

/// Same harness over an arbitrary sampler (blocks of the given sizes).
SnrSweep snr_sweep(const GradientSampler& sampler, std::size_t theta_dim, std::size_t phi_dim,
                   std::size_t m, std::span<const std::size_t> n_grid, std::size_t replicates,
                   std::size_t coordinate_sample, const RngStream& stream,
                   Execution execution = default_execution());

struct GradMseRow {
  std::size_t n = 0;
  double grad_theta_mse = 0.0;  ///< E ||g_theta - grad_theta l||^2 / dim(theta)
  double grad_theta_mse_se = 0.0;
  double bound_mse = 0.0;  ///< E (L_hat - l)^2
  double bound_mse_se = 0.0;
  double bound_bias = 0.0;  ///< E (L_hat - l)
  double bound_bias_se = 0.0;
};

std::vector<GradMseRow> grad_mse_sweep(const Model& model, double alpha,
                                       std::span<const std::size_t> n_grid,
                                       std::size_t replicates, const RngStream& stream,
                                       Execution execution = default_execution());

}  // namespace vriwae

#endif  // VRIWAE_GRADIENTS_HPP
