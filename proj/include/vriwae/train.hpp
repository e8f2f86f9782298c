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

#ifndef VRIWAE_TRAIN_HPP
#define VRIWAE_TRAIN_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "vriwae/gradients.hpp"
#include "vriwae/matrix.hpp"
#include "vriwae/models.hpp"
#include "vriwae/rng.hpp"

namespace vriwae {

enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

/// Learning rate for plain SGD. At d = 1000, alpha = 0.2, N = 100 on the toy,
/// 5000 steps end at B_d^2/d of about 3e-4 (1e-2), 4e-3 (1e-3) and 0.4 (1e-4).
inline constexpr double kDefaultSgdLearningRate = 1e-2;
inline constexpr double kDefaultAdamLearningRate = 1e-3;

struct TrainConfig {
  double alpha = 0.2;
  std::size_t n_importance = 100;
  EstimatorKind estimator = EstimatorKind::kRep;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double learning_rate = kDefaultSgdLearningRate;
  std::size_t epochs = 5000;
  bool train_theta = false;
  bool train_phi = true;
  std::size_t log_every = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  /// Replicates for the gap estimate written with each logged row.
  std::size_t eval_replicates = 100;

  void validate() const;
};

struct TrajectoryRow {
  std::size_t epoch = 0;
  double metric = 0.0;  ///< B_d^2 / d (toy) or lambda (linear Gaussian)
  double gap_mean = 0.0;
  double gap_se = 0.0;
  double grad_norm = 0.0;  ///< norm of the last applied gradient; 0 at epoch 0
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  Model final_model;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDivergenceGradNorm = 1e8;

/// params + lr * grad (ascent).
std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad,
                             double lr);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;

  explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

/// Bias-corrected Adam update in the ascent direction; updates `state`.
std::vector<double> adam_step(AdamState& state, std::span<const double> params,
                              std::span<const double> grad, double lr, double beta1 = 0.9,
                              double beta2 = 0.999, double eps_hat = 1e-8);

/// Stochastic gradient ascent on the VR-IWAE bound, one gradient sample per
/// step. With a dataset (linear Gaussian only), each step averages the
/// per-datapoint estimates over all rows. Logs epoch 0, every `log_every`
/// epochs and the last epoch. Throws TrainingDiverged if a gradient norm
/// exceeds kDivergenceGradNorm.
Trajectory run_training(const Model& model, const TrainConfig& config, const RngStream& stream,
                        const Matrix* dataset = nullptr);

}  // namespace vriwae

#endif  // VRIWAE_TRAIN_HPP
