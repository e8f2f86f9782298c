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

#ifndef VRIWAE_BOUNDS_HPP
#define VRIWAE_BOUNDS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "vriwae/models.hpp"
#include "vriwae/parallel.hpp"
#include "vriwae/rng.hpp"
#include "vriwae/weights.hpp"

/**
 * \file
 * \brief Single-batch and Monte Carlo estimators of the VR-IWAE bound.
 *
 * For a batch of N log-weights the estimate is
 *
 *     (1 / (1 - alpha)) * [logsumexp((1 - alpha) * log w) - log N],
 *
 * which is the IWAE estimate at alpha = 0 and tends to mean(log w) (the ELBO
 * estimate) as alpha -> 1. Within kAlphaOneTolerance of 1 the ELBO path is
 * used directly, since the 1 / (1 - alpha) factor destroys all precision there.
 */

namespace vriwae {

inline constexpr double kAlphaOneTolerance = 1e-8;

/// True when alpha is close enough to 1 to switch to the ELBO path.
inline bool is_elbo_path(double alpha) { return 1.0 - alpha < kAlphaOneTolerance; }

double vr_iwae_sample(std::span<const double> log_weights, double alpha);
double vr_iwae_sample(const LogWeights& lw, double alpha);

/// Mean of the log-weights.
double elbo_sample(std::span<const double> log_weights);
double elbo_sample(const LogWeights& lw);

struct BoundEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< unbiased sample std / sqrt(replicates)
  std::size_t replicates = 0;
  double alpha = 0.0;
  std::size_t n_importance = 0;
};

/// Mean and standard error of per-replicate values.
BoundEstimate summarize(std::span<const double> per_replicate, double alpha,
                        std::size_t n_importance);

/// How replicate batches of log-weights are drawn from a model.
enum class WeightSampling {
  kReduced,  ///< exact low-dimensional representation (Model::sample_relative_log_weights)
  kFull,     ///< full d-dimensional reparameterized draws
};

/// Per-replicate values of the gap estimate vr_iwae_sample(relative weights).
/// Replicate r draws from stream.substream(r).
std::vector<double> gap_replicates(const Model& model, double alpha, std::size_t n,
                                   std::size_t replicates, const RngStream& stream,
                                   Execution execution = default_execution(),
                                   WeightSampling sampling = WeightSampling::kReduced);

/// Monte Carlo estimate of the VR-IWAE bound L_N^(alpha).
BoundEstimate bound_mc(const Model& model, double alpha, std::size_t n, std::size_t replicates,
                       const RngStream& stream, Execution execution = default_execution(),
                       WeightSampling sampling = WeightSampling::kReduced);

/// Monte Carlo estimate of the variational gap L_N^(alpha) - l(theta; x),
/// computed from relative weights so l cancels exactly.
BoundEstimate gap_mc(const Model& model, double alpha, std::size_t n, std::size_t replicates,
                     const RngStream& stream, Execution execution = default_execution(),
                     WeightSampling sampling = WeightSampling::kReduced);

struct GapDecomposition {
  double delta_max = 0.0;  ///< log w_max + log N / (alpha - 1)
  double r_term = 0.0;     ///< log(1 + T) / (1 - alpha)
  double t_stat = 0.0;
};

/// Splits one gap sample (relative log-weights) into its largest-weight term
/// and the remainder driven by the T statistic; alpha in [0, 1).
GapDecomposition decomposition_sample(std::span<const double> relative_log_weights, double alpha);

}  // namespace vriwae

#endif  // VRIWAE_BOUNDS_HPP
