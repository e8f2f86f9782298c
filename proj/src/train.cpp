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

#include "vriwae/train.hpp"

#include <cmath>
#include <string>

#include "vriwae/bounds.hpp"

namespace vriwae {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::kSgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string{name} + "' (expected sgd|adam)");
}

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("TrainConfig: alpha must lie in [0, 1]");
  if (n_importance == 0) throw std::invalid_argument("TrainConfig: N must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (log_every == 0) throw std::invalid_argument("TrainConfig: log_every must be >= 1");
  if (eval_replicates == 0) throw std::invalid_argument("TrainConfig: eval_replicates must be >= 1");
  if (!train_theta && !train_phi) throw std::invalid_argument("TrainConfig: nothing to train");
}

std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad,
                             double lr) {
  if (params.size() != grad.size()) throw std::invalid_argument("sgd_step: shape mismatch");
  std::vector<double> out(params.begin(), params.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += lr * grad[i];
  return out;
}

std::vector<double> adam_step(AdamState& state, std::span<const double> params,
                              std::span<const double> grad, double lr, double beta1,
                              double beta2, double eps_hat) {
  if (params.size() != grad.size() || state.m.size() != grad.size() ||
      state.v.size() != grad.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  const double correction1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  std::vector<double> out(params.begin(), params.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    out[i] += lr * m_hat / (std::sqrt(v_hat) + eps_hat);
  }
  return out;
}

namespace {

std::vector<double> flat_gradient(const Model& model, const TrainConfig& config,
                                  RngStream& stream) {
  const GradientPair pair = gradient_pair_sample(model, config.alpha, config.n_importance, stream);
  const auto& phi = config.estimator == EstimatorKind::kRep ? pair.rep_phi : pair.drep_phi;
  std::vector<double> out;
  out.reserve(pair.grad_theta.size() + phi.size());
  out.insert(out.end(), pair.grad_theta.begin(), pair.grad_theta.end());
  out.insert(out.end(), phi.begin(), phi.end());
  return out;
}

TrajectoryRow log_row(const Model& model, const TrainConfig& config, const RngStream& stream,
                      std::size_t epoch, double grad_norm) {
  const RngStream eval{stream.seed(), derive_stream_id(StreamPurpose::kEvaluation, epoch)};
  const BoundEstimate gap =
      gap_mc(model, config.alpha, config.n_importance, config.eval_replicates, eval);
  return {epoch, model.progress_metric(), gap.mean, gap.std_error, grad_norm};
}

}  // namespace

Trajectory run_training(const Model& initial, const TrainConfig& config, const RngStream& stream,
                        const Matrix* dataset) {
  config.validate();
  if (dataset != nullptr) {
    if (initial.kind() != ModelKind::kLinearGaussian) {
      throw std::invalid_argument("run_training: datasets apply to the linear Gaussian only");
    }
    if (dataset->rows() == 0 || dataset->cols() != initial.dim()) {
      throw std::invalid_argument("run_training: dataset shape does not match the model");
    }
  }

  Model model = initial;
  std::vector<double> params = model.flat_params();
  const std::size_t theta_dim = model.theta_dim();
  AdamState adam{params.size()};

  Trajectory trajectory{{}, model};
  trajectory.rows.push_back(log_row(model, config, stream, 0, 0.0));

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<double> grad(params.size(), 0.0);
    if (dataset == nullptr) {
      RngStream local = stream.substream(static_cast<std::uint32_t>(epoch));
      grad = flat_gradient(model, config, local);
    } else {
      const std::size_t rows = dataset->rows();
      for (std::size_t t = 0; t < rows; ++t) {
        RngStream local = stream.substream(static_cast<std::uint32_t>(epoch * rows + t));
        const auto g = flat_gradient(model.with_datapoint(dataset->row(t)), config, local);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i] / static_cast<double>(rows);
      }
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const bool is_theta = i < theta_dim;
      if ((is_theta && !config.train_theta) || (!is_theta && !config.train_phi)) grad[i] = 0.0;
    }
    double norm2 = 0.0;
    for (double g : grad) norm2 += g * g;
    const double grad_norm = std::sqrt(norm2);
    if (!(grad_norm <= kDivergenceGradNorm)) {
      throw TrainingDiverged("run_training: gradient norm " + std::to_string(grad_norm) +
                             " at epoch " + std::to_string(epoch));
    }

    params = config.optimizer == OptimizerKind::kSgd
                 ? sgd_step(params, grad, config.learning_rate)
                 : adam_step(adam, params, grad, config.learning_rate, config.beta1, config.beta2,
                             config.eps_hat);
    model = model.with_flat_params(params);

    if (epoch % config.log_every == 0 || epoch == config.epochs) {
      trajectory.rows.push_back(log_row(model, config, stream, epoch, grad_norm));
    }
  }
  trajectory.final_model = model;
  return trajectory;
}

}  // namespace vriwae
