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

#include "vriwae/models.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/random/gamma_distribution.hpp>

namespace vriwae {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string{what} + ": dimension mismatch (got " +
                                std::to_string(got) + ", expected " + std::to_string(want) + ")");
  }
}

void require_alpha_open(double alpha, const char* op) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(std::string{op} + ": alpha must lie in [0, 1)");
  }
}

// Variance of q_phi for the linear Gaussian.
constexpr double kLgVariance = 2.0 / 3.0;

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kToy ? "toy" : "lingauss";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "toy") return ModelKind::kToy;
  if (name == "lingauss") return ModelKind::kLinearGaussian;
  throw std::invalid_argument("unknown model '" + std::string{name} + "' (expected toy|lingauss)");
}

Model::Model(GaussianToy toy) : params_{std::move(toy)} {
  const auto& t = std::get<GaussianToy>(params_);
  if (t.theta.empty()) throw std::invalid_argument("GaussianToy: d must be >= 1");
  require_dim(t.phi.size(), t.theta.size(), "GaussianToy phi");
  refresh();
}

Model::Model(LinearGaussian lg) : params_{std::move(lg)} {
  const auto& m = std::get<LinearGaussian>(params_);
  if (m.theta.empty()) throw std::invalid_argument("LinearGaussian: d must be >= 1");
  require_dim(m.a_tilde.size(), m.theta.size(), "LinearGaussian a_tilde");
  require_dim(m.b.size(), m.theta.size(), "LinearGaussian b");
  require_dim(m.x.size(), m.theta.size(), "LinearGaussian x");
  refresh();
}

void Model::refresh() {
  if (const auto* toy = std::get_if<GaussianToy>(&params_)) {
    dim_ = toy->theta.size();
    log_marginal_ = 0.0;
    bd2_ = squared_distance(toy->theta, toy->phi);
    return;
  }
  const auto& m = std::get<LinearGaussian>(params_);
  dim_ = m.theta.size();
  const double d = static_cast<double>(dim_);
  log_marginal_ = -0.5 * d * std::log(4.0 * std::numbers::pi) - 0.25 * squared_distance(m.x, m.theta);
  offset_.resize(dim_);
  offset_norm2_ = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    offset_[i] = 0.5 * (m.theta[i] + m.x[i]) - m.a_tilde[i] * m.x[i] - m.b[i];
    offset_norm2_ += offset_[i] * offset_[i];
  }
  const double lambda2 = offset_norm2_ / d;
  lambda_ = std::sqrt(lambda2);
  sigma2_ = 1.0 / 18.0 + 8.0 / 3.0 * lambda2;
  a_const_ = lambda2 + 1.0 / 6.0 + 0.5 * std::log(0.75);
}

ModelKind Model::kind() const {
  return std::holds_alternative<GaussianToy>(params_) ? ModelKind::kToy : ModelKind::kLinearGaussian;
}

std::size_t Model::phi_dim() const { return kind() == ModelKind::kToy ? dim_ : 2 * dim_; }

const GaussianToy& Model::toy() const {
  if (const auto* t = std::get_if<GaussianToy>(&params_)) return *t;
  throw std::logic_error("Model is not the Gaussian toy");
}

const LinearGaussian& Model::linear_gaussian() const {
  if (const auto* m = std::get_if<LinearGaussian>(&params_)) return *m;
  throw std::logic_error("Model is not the linear Gaussian");
}

ReparamBatch Model::reparam_sample(RngStream& stream, std::size_t n) const {
  ReparamBatch batch{Matrix{n, dim_}, Matrix{n, dim_}};
  stream.fill_normal(batch.eps.data());
  for (std::size_t j = 0; j < n; ++j) reparameterize(batch.eps.row(j), batch.z.row(j));
  return batch;
}

void Model::reparameterize(std::span<const double> eps, std::span<double> z) const {
  require_dim(eps.size(), dim_, "reparameterize eps");
  require_dim(z.size(), dim_, "reparameterize z");
  if (const auto* toy = std::get_if<GaussianToy>(&params_)) {
    for (std::size_t i = 0; i < dim_; ++i) z[i] = toy->phi[i] + eps[i];
    return;
  }
  const auto& m = std::get<LinearGaussian>(params_);
  const double scale = std::sqrt(kLgVariance);
  for (std::size_t i = 0; i < dim_; ++i) z[i] = m.a_tilde[i] * m.x[i] + m.b[i] + scale * eps[i];
}

double Model::log_weight(std::span<const double> z) const {
  require_dim(z.size(), dim_, "log_weight z");
  if (const auto* toy = std::get_if<GaussianToy>(&params_)) {
    return -0.5 * (squared_distance(z, toy->theta) - squared_distance(z, toy->phi));
  }
  const auto& m = std::get<LinearGaussian>(params_);
  const double d = static_cast<double>(dim_);
  double prior = 0.0, likelihood = 0.0, proposal = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double mean_q = m.a_tilde[i] * m.x[i] + m.b[i];
    prior += (z[i] - m.theta[i]) * (z[i] - m.theta[i]);
    likelihood += (m.x[i] - z[i]) * (m.x[i] - z[i]);
    proposal += (z[i] - mean_q) * (z[i] - mean_q);
  }
  // log N(z; theta, I) + log N(x; z, I) - log N(z; mu_q, 2/3 I)
  return -d * std::log(2.0 * std::numbers::pi) - 0.5 * prior - 0.5 * likelihood +
         0.5 * d * std::log(2.0 * std::numbers::pi * kLgVariance) + 0.75 * proposal;
}

double Model::log_relative_weight(std::span<const double> z) const {
  if (kind() == ModelKind::kToy) return log_weight(z);
  const auto& m = std::get<LinearGaussian>(params_);
  const double d = static_cast<double>(dim_);
  // (d/2) log(4/3) - ||z - (theta + x)/2||^2 + (3/4) ||z - A x - b||^2
  double to_posterior = 0.0, to_proposal = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double posterior_mean = 0.5 * (m.theta[i] + m.x[i]);
    const double mean_q = m.a_tilde[i] * m.x[i] + m.b[i];
    to_posterior += (z[i] - posterior_mean) * (z[i] - posterior_mean);
    to_proposal += (z[i] - mean_q) * (z[i] - mean_q);
  }
  return 0.5 * d * std::log(4.0 / 3.0) - to_posterior + 0.75 * to_proposal;
}

void Model::score_grads(std::span<const double> eps, std::span<const double> z,
                        std::span<double> d_theta, std::span<double> d_phi_total,
                        std::span<double> d_phi_stopped) const {
  require_dim(eps.size(), dim_, "score_grads eps");
  require_dim(z.size(), dim_, "score_grads z");
  require_dim(d_theta.size(), theta_dim(), "score_grads d_theta");
  require_dim(d_phi_total.size(), phi_dim(), "score_grads d_phi_total");
  require_dim(d_phi_stopped.size(), phi_dim(), "score_grads d_phi_stopped");

  if (const auto* toy = std::get_if<GaussianToy>(&params_)) {
    for (std::size_t i = 0; i < dim_; ++i) {
      d_theta[i] = z[i] - toy->theta[i];
      // z - phi = eps does not move with phi, so only the p term contributes.
      d_phi_total[i] = -(z[i] - toy->theta[i]);
      d_phi_stopped[i] = -(z[i] - toy->theta[i]) + (z[i] - toy->phi[i]);
    }
    return;
  }
  const auto& m = std::get<LinearGaussian>(params_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double mean_q = m.a_tilde[i] * m.x[i] + m.b[i];
    d_theta[i] = z[i] - m.theta[i];
    const double path_p = -(z[i] - m.theta[i]) - (z[i] - m.x[i]);
    const double path_stopped = path_p + 1.5 * (z[i] - mean_q);
    // dz/da_i = x_i, dz/db_i = 1
    d_phi_total[i] = m.x[i] * path_p;
    d_phi_total[dim_ + i] = path_p;
    d_phi_stopped[i] = m.x[i] * path_stopped;
    d_phi_stopped[dim_ + i] = path_stopped;
  }
}

ScoreGrads Model::score_grads(std::span<const double> eps, std::span<const double> z) const {
  ScoreGrads out{std::vector<double>(theta_dim()), std::vector<double>(phi_dim()),
                 std::vector<double>(phi_dim())};
  score_grads(eps, z, out.d_theta, out.d_phi_total, out.d_phi_stopped);
  return out;
}

void Model::sample_relative_log_weights(RngStream& stream, std::span<double> out) const {
  if (kind() == ModelKind::kToy) {
    const double bd = std::sqrt(bd2_);
    for (double& v : out) v = -0.5 * bd2_ - bd * stream.normal();
    return;
  }
  // Rotate the offset onto the first axis: with y = z - A x - b ~ N(0, 2/3 I),
  // log w = (d/2) log(4/3) - ||y||^2 / 4 + 2 <y, delta> - ||delta||^2 and
  // ||y||^2 = y_1^2 + (4/3) Gamma((d - 1)/2, 1).
  const double d = static_cast<double>(dim_);
  const double norm = std::sqrt(offset_norm2_);
  const double constant = 0.5 * d * std::log(4.0 / 3.0) - offset_norm2_;
  const double scale = std::sqrt(kLgVariance);
  std::optional<boost::random::gamma_distribution<double>> rest;
  if (dim_ > 1) rest.emplace(0.5 * (d - 1.0), 1.0);
  for (double& v : out) {
    const double y1 = scale * stream.normal();
    const double tail = rest ? (4.0 / 3.0) * (*rest)(stream) : 0.0;
    v = constant - 0.25 * (y1 * y1 + tail) + 2.0 * norm * y1;
  }
}

void Model::sample_relative_log_weights_full(RngStream& stream, std::span<double> out) const {
  std::vector<double> eps(dim_), z(dim_);
  for (double& v : out) {
    stream.fill_normal(eps);
    reparameterize(eps, z);
    v = log_relative_weight(z);
  }
}

std::vector<double> Model::flat_params() const {
  std::vector<double> out;
  out.reserve(param_dim());
  if (const auto* toy = std::get_if<GaussianToy>(&params_)) {
    out.insert(out.end(), toy->theta.begin(), toy->theta.end());
    out.insert(out.end(), toy->phi.begin(), toy->phi.end());
    return out;
  }
  const auto& m = std::get<LinearGaussian>(params_);
  out.insert(out.end(), m.theta.begin(), m.theta.end());
  out.insert(out.end(), m.a_tilde.begin(), m.a_tilde.end());
  out.insert(out.end(), m.b.begin(), m.b.end());
  return out;
}

Model Model::with_flat_params(std::span<const double> params) const {
  require_dim(params.size(), param_dim(), "with_flat_params");
  const auto block = [&](std::size_t k) {
    return std::vector<double>(params.begin() + static_cast<std::ptrdiff_t>(k * dim_),
                               params.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim_));
  };
  if (kind() == ModelKind::kToy) return Model{GaussianToy{block(0), block(1)}};
  return Model{LinearGaussian{block(0), block(1), block(2), linear_gaussian().x}};
}

Model Model::with_datapoint(std::span<const double> x) const {
  LinearGaussian copy = linear_gaussian();
  require_dim(x.size(), dim_, "with_datapoint");
  copy.x.assign(x.begin(), x.end());
  return Model{std::move(copy)};
}

std::vector<double> Model::grad_theta_log_marginal() const {
  std::vector<double> out(dim_, 0.0);
  if (const auto* m = std::get_if<LinearGaussian>(&params_)) {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = 0.5 * (m->x[i] - m->theta[i]);
  }
  return out;
}

double Model::progress_metric() const {
  return kind() == ModelKind::kToy ? bd2_ / static_cast<double>(dim_) : lambda_;
}

double Model::bd2() const {
  if (kind() != ModelKind::kToy) throw std::logic_error("bd2: toy model only");
  return bd2_;
}

const std::vector<double>& Model::offset() const {
  if (kind() != ModelKind::kLinearGaussian) throw std::logic_error("offset: linear Gaussian only");
  return offset_;
}

double Model::lambda() const {
  if (kind() != ModelKind::kLinearGaussian) throw std::logic_error("lambda: linear Gaussian only");
  return lambda_;
}

double Model::sigma2() const {
  if (kind() != ModelKind::kLinearGaussian) throw std::logic_error("sigma2: linear Gaussian only");
  return sigma2_;
}

double Model::a_const() const {
  if (kind() != ModelKind::kLinearGaussian) throw std::logic_error("a_const: linear Gaussian only");
  return a_const_;
}

Model make_toy(std::size_t d, double theta_scale) {
  return Model{GaussianToy{std::vector<double>(d, theta_scale), std::vector<double>(d, 1.0)}};
}

ToyAnalytics toy_analytics(double alpha, double bd2) {
  require_alpha_open(alpha, "toy_analytics");
  if (!(bd2 >= 0.0)) throw std::invalid_argument("toy_analytics: B_d^2 must be >= 0");
  const double beta = 1.0 - alpha;
  return {-0.5 * alpha * bd2, std::expm1(beta * beta * bd2) / beta};
}

LinGaussAnalytics lingauss_analytics(const Model& model, double alpha) {
  require_alpha_open(alpha, "lingauss_analytics");
  const double d = static_cast<double>(model.dim());
  const double beta = 1.0 - alpha;
  const double delta2 = model.lambda() * model.lambda() * d;

  LinGaussAnalytics out;
  out.lambda = model.lambda();
  out.sigma2 = model.sigma2();
  out.a_const = model.a_const();
  out.vr_gap = 0.5 * d * (std::log(4.0 / 3.0) + std::log(3.0 / (4.0 - alpha)) / beta) -
               3.0 * alpha / (4.0 - alpha) * delta2;
  const double log_ratio = d * std::log(4.0 - alpha) - 0.5 * d * std::log(15.0 - 6.0 * alpha) +
                           24.0 * beta * beta / ((5.0 - 2.0 * alpha) * (4.0 - alpha)) * delta2;
  out.gamma2 = std::expm1(log_ratio) / beta;
  return out;
}

OptimalParams optimal_params(const Matrix& dataset) {
  if (dataset.rows() == 0) throw std::invalid_argument("optimal_params: empty dataset");
  const std::size_t d = dataset.cols();
  OptimalParams out{std::vector<double>(d, 0.0), std::vector<double>(d, 0.5),
                    std::vector<double>(d, 0.0)};
  for (std::size_t t = 0; t < dataset.rows(); ++t) {
    for (std::size_t i = 0; i < d; ++i) out.theta_star[i] += dataset(t, i);
  }
  for (std::size_t i = 0; i < d; ++i) {
    out.theta_star[i] /= static_cast<double>(dataset.rows());
    out.b_star[i] = 0.5 * out.theta_star[i];
  }
  return out;
}

Matrix make_dataset(std::size_t T, std::size_t d, RngStream& stream) {
  if (T == 0) throw std::invalid_argument("make_dataset: T must be >= 1");
  Matrix data{T, d};
  stream.fill_normal(data.data());
  for (double& v : data.data()) v *= std::numbers::sqrt2;
  return data;
}

std::vector<double> perturb_params(std::span<const double> params, double sigma_perturb,
                                   RngStream& stream) {
  if (!(sigma_perturb >= 0.0)) throw std::invalid_argument("perturb_params: sigma must be >= 0");
  std::vector<double> out(params.begin(), params.end());
  if (sigma_perturb == 0.0) return out;
  for (double& v : out) v += sigma_perturb * stream.normal();
  return out;
}

LinearGaussianSetup make_linear_gaussian_setup(std::size_t d, double sigma_perturb,
                                               std::uint64_t seed, std::size_t dataset_size) {
  if (d == 0) throw std::invalid_argument("make_linear_gaussian_setup: d must be >= 1");
  RngStream data_stream{seed, derive_stream_id(StreamPurpose::kDataset, d)};
  Matrix dataset = make_dataset(dataset_size, d, data_stream);
  OptimalParams optimum = optimal_params(dataset);

  RngStream pick_stream{seed, derive_stream_id(StreamPurpose::kDatapoint, d)};
  const std::size_t index = static_cast<std::size_t>(pick_stream.next_u64() % dataset.rows());
  const auto x = dataset.row(index);

  Model at_optimum{LinearGaussian{optimum.theta_star, optimum.a_star, optimum.b_star,
                                  std::vector<double>(x.begin(), x.end())}};
  RngStream perturb_stream{seed, derive_stream_id(StreamPurpose::kPerturb, d)};
  const auto perturbed = perturb_params(at_optimum.flat_params(), sigma_perturb, perturb_stream);
  Model model = at_optimum.with_flat_params(perturbed);
  return LinearGaussianSetup{std::move(dataset), std::move(optimum), index, std::move(model)};
}

}  // namespace vriwae
