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

#include "vriwae/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vriwae/bounds.hpp"
#include "vriwae/numeric.hpp"

namespace vriwae {

namespace {

void require_alpha_closed(double alpha, const char* op) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(std::string{op} + ": alpha must lie in [0, 1]");
  }
}

// Mean and standard error of each column of a replicate-major table.
GradientEstimate column_summary(const std::vector<std::vector<double>>& rows) {
  GradientEstimate out;
  out.replicates = rows.size();
  if (rows.empty()) return out;
  const std::size_t width = rows.front().size();
  out.mean.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < width; ++k) out.mean[k] += row[k];
  }
  const double count = static_cast<double>(rows.size());
  for (double& m : out.mean) m /= count;
  if (rows.size() < 2) return out;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < width; ++k) {
      out.std_error[k] += (row[k] - out.mean[k]) * (row[k] - out.mean[k]);
    }
  }
  for (double& s : out.std_error) s = std::sqrt(s / (count - 1.0) / count);
  return out;
}

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) { return kind == EstimatorKind::kRep ? "rep" : "drep"; }

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "rep") return EstimatorKind::kRep;
  if (name == "drep") return EstimatorKind::kDrep;
  throw std::invalid_argument("unknown estimator '" + std::string{name} + "' (expected rep|drep)");
}

void h_coefficients(std::span<const double> s, double alpha, std::span<double> out) {
  require_alpha_closed(alpha, "h_coefficients");
  if (s.empty() || s.size() != out.size()) {
    throw std::invalid_argument("h_coefficients: need a non-empty probability vector");
  }
  double total = 0.0;
  for (double v : s) {
    if (!(v >= 0.0)) throw std::invalid_argument("h_coefficients: negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("h_coefficients: entries must sum to 1");
  }
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = alpha * s[j] + (1.0 - alpha) * s[j] * s[j];
}

std::vector<double> h_coefficients(std::span<const double> s, double alpha) {
  std::vector<double> out(s.size());
  h_coefficients(s, alpha, out);
  return out;
}

GradientPair gradient_pair_sample(const Model& model, double alpha, std::size_t n,
                                  RngStream& stream, std::size_t m,
                                  const HCoefficientFn& h_rule) {
  require_alpha_closed(alpha, "gradient_pair_sample");
  if (n == 0) throw std::invalid_argument("gradient_pair_sample: N must be >= 1");
  if (m == 0) throw std::invalid_argument("gradient_pair_sample: M must be >= 1");

  const std::size_t td = model.theta_dim();
  const std::size_t pd = model.phi_dim();
  GradientPair out{std::vector<double>(td, 0.0), std::vector<double>(pd, 0.0),
                   std::vector<double>(pd, 0.0)};
  std::vector<double> lw(n), s(n), h(n);
  std::vector<double> d_theta(td), d_total(pd), d_stopped(pd);

  for (std::size_t batch_index = 0; batch_index < m; ++batch_index) {
    const ReparamBatch batch = model.reparam_sample(stream, n);
    for (std::size_t j = 0; j < n; ++j) lw[j] = model.log_weight(batch.z.row(j));
    if (is_elbo_path(alpha)) {
      std::fill(s.begin(), s.end(), 1.0 / static_cast<double>(n));
    } else {
      softmax(lw, 1.0 - alpha, s);
    }
    if (h_rule) {
      h_rule(s, alpha, h);
    } else {
      h_coefficients(s, alpha, h);
    }
    for (std::size_t j = 0; j < n; ++j) {
      model.score_grads(batch.eps.row(j), batch.z.row(j), d_theta, d_total, d_stopped);
      for (std::size_t k = 0; k < td; ++k) out.grad_theta[k] += s[j] * d_theta[k];
      for (std::size_t k = 0; k < pd; ++k) {
        out.rep_phi[k] += s[j] * d_total[k];
        out.drep_phi[k] += h[j] * d_stopped[k];
      }
    }
  }
  if (m > 1) {
    const double inv = 1.0 / static_cast<double>(m);
    for (double& v : out.grad_theta) v *= inv;
    for (double& v : out.rep_phi) v *= inv;
    for (double& v : out.drep_phi) v *= inv;
  }
  return out;
}

GradientSample rep_grad_sample(const Model& model, double alpha, std::size_t n, RngStream& stream) {
  GradientPair pair = gradient_pair_sample(model, alpha, n, stream);
  return {std::move(pair.grad_theta), std::move(pair.rep_phi), alpha, n, EstimatorKind::kRep};
}

GradientSample drep_grad_sample(const Model& model, double alpha, std::size_t n,
                                RngStream& stream) {
  GradientPair pair = gradient_pair_sample(model, alpha, n, stream);
  return {std::move(pair.grad_theta), std::move(pair.drep_phi), alpha, n, EstimatorKind::kDrep};
}

EstimatorMeans gradient_means(const Model& model, double alpha, std::size_t n,
                              std::size_t replicates, const RngStream& stream,
                              Execution execution, const HCoefficientFn& h_rule) {
  if (replicates == 0) throw std::invalid_argument("gradient_means: replicates must be >= 1");
  const auto pairs = map_replicates(replicates, execution, [&](std::size_t r) {
    RngStream local = stream.substream(static_cast<std::uint32_t>(r));
    return gradient_pair_sample(model, alpha, n, local, 1, h_rule);
  });
  std::vector<std::vector<double>> rep_rows, drep_rows;
  rep_rows.reserve(replicates);
  drep_rows.reserve(replicates);
  for (const auto& p : pairs) {
    rep_rows.push_back(concat(p.grad_theta, p.rep_phi));
    drep_rows.push_back(concat(p.grad_theta, p.drep_phi));
  }
  return {column_summary(rep_rows), column_summary(drep_rows)};
}

GradientEstimate fd_grad_oracle(const Model& model, double alpha, std::size_t n, double step,
                                std::size_t replicates, const RngStream& stream,
                                Execution execution) {
  require_alpha_closed(alpha, "fd_grad_oracle");
  if (!(step > 0.0)) throw std::invalid_argument("fd_grad_oracle: step must be > 0");
  if (n == 0 || replicates == 0) {
    throw std::invalid_argument("fd_grad_oracle: N and replicates must be >= 1");
  }
  const std::vector<double> params = model.flat_params();
  const std::size_t width = params.size();
  std::vector<Model> plus, minus;
  plus.reserve(width);
  minus.reserve(width);
  for (std::size_t k = 0; k < width; ++k) {
    std::vector<double> shifted = params;
    shifted[k] = params[k] + step;
    plus.push_back(model.with_flat_params(shifted));
    shifted[k] = params[k] - step;
    minus.push_back(model.with_flat_params(shifted));
  }
  const std::size_t d = model.dim();

  const auto rows = map_replicates(replicates, execution, [&](std::size_t r) {
    RngStream local = stream.substream(static_cast<std::uint32_t>(r));
    const std::vector<double> eps = standard_normal(local, n * d);
    std::vector<double> z(d), lw(n), diff(width);
    const auto estimate = [&](const Model& shifted) {
      for (std::size_t j = 0; j < n; ++j) {
        shifted.reparameterize(std::span<const double>{eps}.subspan(j * d, d), z);
        lw[j] = shifted.log_weight(z);
      }
      return vr_iwae_sample(lw, alpha);
    };
    for (std::size_t k = 0; k < width; ++k) {
      diff[k] = (estimate(plus[k]) - estimate(minus[k])) / (2.0 * step);
    }
    return diff;
  });
  return column_summary(rows);
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("central_difference: step must be > 0");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    point[k] = x[k] + step;
    const double up = f(point);
    point[k] = x[k] - step;
    const double down = f(point);
    point[k] = x[k];
    out[k] = (up - down) / (2.0 * step);
  }
  return out;
}

namespace {

std::vector<std::size_t> sample_coordinates(std::size_t block_size, std::size_t count,
                                            RngStream& stream) {
  std::vector<std::size_t> index(block_size);
  std::iota(index.begin(), index.end(), std::size_t{0});
  if (count >= block_size) return index;
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.next_u64() % (block_size - i));
    std::swap(index[i], index[j]);
  }
  index.resize(count);
  std::sort(index.begin(), index.end());
  return index;
}

// |mean| / std of each selected column; +inf when the column has zero variance.
std::vector<double> coordinate_snr(const std::vector<std::vector<double>>& rows,
                                   const std::vector<std::size_t>& coordinates) {
  std::vector<double> out;
  out.reserve(coordinates.size());
  std::vector<double> column(rows.size());
  for (std::size_t c : coordinates) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
    const auto [mean, sd] = mean_std(column);
    out.push_back(sd > 0.0 ? std::abs(mean) / sd : std::numeric_limits<double>::infinity());
  }
  return out;
}

double finite_average(std::span<const double> values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  return count == 0 ? std::numeric_limits<double>::infinity() : sum / static_cast<double>(count);
}

void fit_block(SnrBlock& block, std::span<const std::size_t> n_grid) {
  std::vector<double> log_n, log_snr;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const double v = block.snr_mean[k];
    if (std::isfinite(v) && v > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n_grid[k])));
      log_snr.push_back(std::log(v));
    }
  }
  if (log_n.size() >= 2) {
    block.fit = slope_fit(log_n, log_snr);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    block.fit = SlopeFit{nan, nan, nan, nan, nan, log_n.size()};
  }
}

}  // namespace

SnrSweep snr_sweep(const GradientSampler& sampler, std::size_t theta_dim, std::size_t phi_dim,
                   std::size_t m, std::span<const std::size_t> n_grid, std::size_t replicates,
                   std::size_t coordinate_sample, const RngStream& stream, Execution execution) {
  if (n_grid.empty()) throw std::invalid_argument("snr_sweep: empty N grid");
  for (std::size_t k = 1; k < n_grid.size(); ++k) {
    if (n_grid[k] <= n_grid[k - 1]) throw std::invalid_argument("snr_sweep: N grid must be strictly increasing");
  }
  if (n_grid.front() == 0) throw std::invalid_argument("snr_sweep: N must be >= 1");
  if (replicates < 2) throw std::invalid_argument("snr_sweep: replicates must be >= 2");
  if (coordinate_sample == 0) throw std::invalid_argument("snr_sweep: coordinate_sample must be >= 1");
  if (m == 0) throw std::invalid_argument("snr_sweep: M must be >= 1");

  RngStream pick{stream.seed(), derive_stream_id(StreamPurpose::kCoordinates, stream.stream_id())};
  const auto theta_coords = sample_coordinates(theta_dim, coordinate_sample, pick);
  const auto phi_coords = sample_coordinates(phi_dim, coordinate_sample, pick);

  SnrSweep out;
  for (SnrReport* report : {&out.rep, &out.drep}) {
    report->m = m;
    report->n_grid.assign(n_grid.begin(), n_grid.end());
    report->theta.coordinates = theta_coords;
    report->phi.coordinates = phi_coords;
  }
  out.rep.estimator_kind = EstimatorKind::kRep;
  out.drep.estimator_kind = EstimatorKind::kDrep;

  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const std::size_t n = n_grid[k];
    const auto pairs = map_replicates(replicates, execution, [&](std::size_t r) {
      RngStream local = stream.substream(static_cast<std::uint32_t>(k * replicates + r));
      if (m == 1) return sampler(n, local);
      GradientPair acc = sampler(n, local);
      for (std::size_t b = 1; b < m; ++b) {
        const GradientPair next = sampler(n, local);
        for (std::size_t i = 0; i < acc.grad_theta.size(); ++i) acc.grad_theta[i] += next.grad_theta[i];
        for (std::size_t i = 0; i < acc.rep_phi.size(); ++i) acc.rep_phi[i] += next.rep_phi[i];
        for (std::size_t i = 0; i < acc.drep_phi.size(); ++i) acc.drep_phi[i] += next.drep_phi[i];
      }
      const double inv = 1.0 / static_cast<double>(m);
      for (double& v : acc.grad_theta) v *= inv;
      for (double& v : acc.rep_phi) v *= inv;
      for (double& v : acc.drep_phi) v *= inv;
      return acc;
    });
    std::vector<std::vector<double>> theta_rows, rep_rows, drep_rows;
    theta_rows.reserve(replicates);
    rep_rows.reserve(replicates);
    drep_rows.reserve(replicates);
    for (const auto& p : pairs) {
      theta_rows.push_back(p.grad_theta);
      rep_rows.push_back(p.rep_phi);
      drep_rows.push_back(p.drep_phi);
    }
    const auto theta_snr = coordinate_snr(theta_rows, theta_coords);
    for (SnrReport* report : {&out.rep, &out.drep}) {
      report->theta.per_coordinate.push_back(theta_snr);
      report->theta.snr_mean.push_back(finite_average(theta_snr));
    }
    const auto rep_snr = coordinate_snr(rep_rows, phi_coords);
    out.rep.phi.per_coordinate.push_back(rep_snr);
    out.rep.phi.snr_mean.push_back(finite_average(rep_snr));
    const auto drep_snr = coordinate_snr(drep_rows, phi_coords);
    out.drep.phi.per_coordinate.push_back(drep_snr);
    out.drep.phi.snr_mean.push_back(finite_average(drep_snr));
  }
  for (SnrReport* report : {&out.rep, &out.drep}) {
    fit_block(report->theta, n_grid);
    fit_block(report->phi, n_grid);
  }
  return out;
}

SnrSweep snr_sweep(const Model& model, double alpha, std::size_t m,
                   std::span<const std::size_t> n_grid, std::size_t replicates,
                   std::size_t coordinate_sample, const RngStream& stream, Execution execution) {
  require_alpha_closed(alpha, "snr_sweep");
  const GradientSampler sampler = [&model, alpha](std::size_t n, RngStream& local) {
    return gradient_pair_sample(model, alpha, n, local);
  };
  return snr_sweep(sampler, model.theta_dim(), model.phi_dim(), m, n_grid, replicates,
                   coordinate_sample, stream, execution);
}

std::vector<GradMseRow> grad_mse_sweep(const Model& model, double alpha,
                                       std::span<const std::size_t> n_grid,
                                       std::size_t replicates, const RngStream& stream,
                                       Execution execution) {
  require_alpha_closed(alpha, "grad_mse_sweep");
  if (replicates < 2) throw std::invalid_argument("grad_mse_sweep: replicates must be >= 2");
  const std::vector<double> exact_grad = model.grad_theta_log_marginal();
  const double exact_l = model.log_marginal();
  const double dim = static_cast<double>(model.theta_dim());

  struct Sample {
    double grad_sq = 0.0;
    double bound_err = 0.0;
  };
  std::vector<GradMseRow> out;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const std::size_t n = n_grid[k];
    const auto samples = map_replicates(replicates, execution, [&](std::size_t r) {
      RngStream local = stream.substream(static_cast<std::uint32_t>(k * replicates + r));
      // Draws are shared: the bound estimate uses the batch behind the gradient.
      RngStream replay = local;
      const GradientPair g = gradient_pair_sample(model, alpha, n, local);
      const ReparamBatch batch = model.reparam_sample(replay, n);
      std::vector<double> lw(n);
      for (std::size_t j = 0; j < n; ++j) lw[j] = model.log_weight(batch.z.row(j));
      Sample s;
      for (std::size_t i = 0; i < g.grad_theta.size(); ++i) {
        s.grad_sq += (g.grad_theta[i] - exact_grad[i]) * (g.grad_theta[i] - exact_grad[i]);
      }
      s.grad_sq /= dim;
      s.bound_err = vr_iwae_sample(lw, alpha) - exact_l;
      return s;
    });
    std::vector<double> grad_sq(replicates), bound_sq(replicates), bound_err(replicates);
    for (std::size_t r = 0; r < replicates; ++r) {
      grad_sq[r] = samples[r].grad_sq;
      bound_err[r] = samples[r].bound_err;
      bound_sq[r] = bound_err[r] * bound_err[r];
    }
    const double root = std::sqrt(static_cast<double>(replicates));
    const auto g = mean_std(grad_sq);
    const auto b = mean_std(bound_sq);
    const auto e = mean_std(bound_err);
    out.push_back({n, g.mean, g.std / root, b.mean, b.std / root, e.mean, e.std / root});
  }
  return out;
}

}  // namespace vriwae
