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

#ifndef VRIWAE_MODELS_HPP
#define VRIWAE_MODELS_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "vriwae/matrix.hpp"
#include "vriwae/rng.hpp"

/**
 * \file
 * \brief The two analytic testbeds.
 *
 * Gaussian toy: p_theta(z|x) = N(theta, I), q_phi(z) = N(phi, I). The weights
 * are relative by construction (log marginal is 0), and with
 * B_d = ||theta - phi|| a draw z ~ q gives log w = -B_d^2/2 - B_d S, S ~ N(0,1).
 *
 * Linear Gaussian: p_theta(z) = N(theta, I), p(x|z) = N(z, I),
 * q_phi(z|x) = N(A x + b, 2/3 I) with A = diag(a_tilde). Exact marginal
 * p_theta(x) = N(x; theta, 2I), exact posterior N((theta + x)/2, I/2).
 *
 * Flattened parameter order is [theta, phi] with phi = (a_tilde, b) for the
 * linear Gaussian.
 */

namespace vriwae {

enum class ModelKind { kToy, kLinearGaussian };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct GaussianToy {
  std::vector<double> theta;
  std::vector<double> phi;
};

struct LinearGaussian {
  std::vector<double> theta;
  std::vector<double> a_tilde;
  std::vector<double> b;
  std::vector<double> x;
};

struct ReparamBatch {
  Matrix eps;
  Matrix z;
};

struct ScoreGrads {
  std::vector<double> d_theta;
  /// Derivative through the sample path and the explicit q_phi term.
  std::vector<double> d_phi_total;
  /// Derivative through the sample path only (q parameters held fixed).
  std::vector<double> d_phi_stopped;
};

/// An immutable model instance with its derived constants cached.
class Model {
 public:
  explicit Model(GaussianToy toy);
  explicit Model(LinearGaussian lg);

  [[nodiscard]] ModelKind kind() const;
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t theta_dim() const { return dim_; }
  [[nodiscard]] std::size_t phi_dim() const;
  [[nodiscard]] std::size_t param_dim() const { return theta_dim() + phi_dim(); }

  [[nodiscard]] const GaussianToy& toy() const;
  [[nodiscard]] const LinearGaussian& linear_gaussian() const;

  /// Exact log p_theta(x); identically 0 for the toy.
  [[nodiscard]] double log_marginal() const { return log_marginal_; }

  /// Draws eps ~ N(0, I) and maps it through the reparameterization.
  ReparamBatch reparam_sample(RngStream& stream, std::size_t n) const;
  /// z = f(eps, phi).
  void reparameterize(std::span<const double> eps, std::span<double> z) const;

  /// Unnormalized log w = log p_theta(x, z) - log q_phi(z|x).
  [[nodiscard]] double log_weight(std::span<const double> z) const;
  /// log w - log p_theta(x).
  [[nodiscard]] double log_relative_weight(std::span<const double> z) const;

  /// Analytic gradients of the unnormalized log-weight at z = f(eps, phi).
  void score_grads(std::span<const double> eps, std::span<const double> z,
                   std::span<double> d_theta, std::span<double> d_phi_total,
                   std::span<double> d_phi_stopped) const;
  [[nodiscard]] ScoreGrads score_grads(std::span<const double> eps,
                                       std::span<const double> z) const;

  /// Exact draws of the log relative weights through a low-dimensional
  /// representation of their law (O(1) normals per weight instead of d).
  void sample_relative_log_weights(RngStream& stream, std::span<double> out) const;
  /// The same law computed from full d-dimensional reparameterized draws.
  void sample_relative_log_weights_full(RngStream& stream, std::span<double> out) const;

  [[nodiscard]] std::vector<double> flat_params() const;
  [[nodiscard]] Model with_flat_params(std::span<const double> params) const;
  /// Linear Gaussian only: the same parameters at another datapoint.
  [[nodiscard]] Model with_datapoint(std::span<const double> x) const;

  /// Exact gradient of log p_theta(x) with respect to theta.
  [[nodiscard]] std::vector<double> grad_theta_log_marginal() const;

  /// B_d^2 / d for the toy, lambda for the linear Gaussian.
  [[nodiscard]] double progress_metric() const;

  /// Toy: B_d^2 = ||theta - phi||^2.
  [[nodiscard]] double bd2() const;
  /// Linear Gaussian: offset delta = (theta + x)/2 - A x - b and its constants.
  [[nodiscard]] const std::vector<double>& offset() const;
  [[nodiscard]] double lambda() const;
  [[nodiscard]] double sigma2() const;
  [[nodiscard]] double a_const() const;

 private:
  void refresh();

  std::variant<GaussianToy, LinearGaussian> params_;
  std::size_t dim_ = 0;
  double log_marginal_ = 0.0;
  double bd2_ = 0.0;
  std::vector<double> offset_;
  double offset_norm2_ = 0.0;
  double lambda_ = 0.0;
  double sigma2_ = 0.0;
  double a_const_ = 0.0;
};

/// Toy with theta = theta_scale * u_d and phi = u_d, so B_d = |1 - theta_scale| sqrt(d).
Model make_toy(std::size_t d, double theta_scale = 0.0);

struct ToyAnalytics {
  double vr_gap = 0.0;  ///< L^(alpha) - l = -alpha B^2 / 2
  double gamma2 = 0.0;  ///< (exp((1-alpha)^2 B^2) - 1) / (1 - alpha)
};

/// Closed forms for exactly log-normal weights; `bd2` plays the role of sigma^2 d.
ToyAnalytics toy_analytics(double alpha, double bd2);

struct LinGaussAnalytics {
  double vr_gap = 0.0;
  double gamma2 = 0.0;
  double lambda = 0.0;
  double sigma2 = 0.0;
  double a_const = 0.0;
};

LinGaussAnalytics lingauss_analytics(const Model& model, double alpha);

struct OptimalParams {
  std::vector<double> theta_star;
  std::vector<double> a_star;
  std::vector<double> b_star;
};

/// theta* = data mean, a* = u_d / 2, b* = theta* / 2.
OptimalParams optimal_params(const Matrix& dataset);

/// T i.i.d. rows from N(0, 2 I_d).
Matrix make_dataset(std::size_t T, std::size_t d, RngStream& stream);

/// Adds i.i.d. N(0, sigma_perturb^2) noise to every coordinate.
std::vector<double> perturb_params(std::span<const double> params, double sigma_perturb,
                                   RngStream& stream);

struct LinearGaussianSetup {
  Matrix dataset;
  OptimalParams optimum;
  std::size_t datapoint_index = 0;
  Model model;
};

inline constexpr std::size_t kDefaultDatasetSize = 1024;

/// Dataset, optimum, perturbed parameters and a randomly chosen datapoint,
/// all derived from `seed`.
LinearGaussianSetup make_linear_gaussian_setup(std::size_t d, double sigma_perturb,
                                               std::uint64_t seed,
                                               std::size_t dataset_size = kDefaultDatasetSize);

}  // namespace vriwae

#endif  // VRIWAE_MODELS_HPP
