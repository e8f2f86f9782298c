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

#include "vriwae/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vriwae/numeric.hpp"

namespace vriwae {

namespace {

void require_alpha_closed(double alpha, const char* op) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(std::string{op} + ": alpha must lie in [0, 1]");
  }
}

}  // namespace

double vr_iwae_sample(std::span<const double> lw, double alpha) {
  require_alpha_closed(alpha, "vr_iwae_sample");
  if (lw.empty()) throw std::invalid_argument("vr_iwae_sample: N must be >= 1");
  if (is_elbo_path(alpha)) return elbo_sample(lw);
  const double beta = 1.0 - alpha;
  // The max is factored out so that equal weights (and N = 1) give the
  // common value exactly for every alpha.
  const double peak = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : lw) sum += std::exp(beta * (v - peak));
  return peak + (std::log(sum) - std::log(static_cast<double>(lw.size()))) / beta;
}

double vr_iwae_sample(const LogWeights& lw, double alpha) {
  return vr_iwae_sample(lw.values(), alpha);
}

double elbo_sample(std::span<const double> lw) {
  if (lw.empty()) throw std::invalid_argument("elbo_sample: N must be >= 1");
  double sum = 0.0;
  for (double v : lw) sum += v;
  return sum / static_cast<double>(lw.size());
}

double elbo_sample(const LogWeights& lw) { return elbo_sample(lw.values()); }

BoundEstimate summarize(std::span<const double> values, double alpha, std::size_t n_importance) {
  if (values.empty()) throw std::invalid_argument("summarize: replicates must be >= 1");
  const auto [mean, sd] = mean_std(values);
  return {mean, sd / std::sqrt(static_cast<double>(values.size())), values.size(), alpha,
          n_importance};
}

std::vector<double> gap_replicates(const Model& model, double alpha, std::size_t n,
                                   std::size_t replicates, const RngStream& stream,
                                   Execution execution, WeightSampling sampling) {
  require_alpha_closed(alpha, "gap_replicates");
  if (n == 0) throw std::invalid_argument("gap_replicates: N must be >= 1");
  if (replicates == 0) throw std::invalid_argument("gap_replicates: replicates must be >= 1");
  return map_replicates(replicates, execution, [&](std::size_t r) {
    RngStream local = stream.substream(static_cast<std::uint32_t>(r));
    std::vector<double> lw(n);
    if (sampling == WeightSampling::kReduced) {
      model.sample_relative_log_weights(local, lw);
    } else {
      model.sample_relative_log_weights_full(local, lw);
    }
    return vr_iwae_sample(lw, alpha);
  });
}

BoundEstimate gap_mc(const Model& model, double alpha, std::size_t n, std::size_t replicates,
                     const RngStream& stream, Execution execution, WeightSampling sampling) {
  const auto values = gap_replicates(model, alpha, n, replicates, stream, execution, sampling);
  return summarize(values, alpha, n);
}

BoundEstimate bound_mc(const Model& model, double alpha, std::size_t n, std::size_t replicates,
                       const RngStream& stream, Execution execution, WeightSampling sampling) {
  BoundEstimate out = gap_mc(model, alpha, n, replicates, stream, execution, sampling);
  out.mean += model.log_marginal();
  return out;
}

GapDecomposition decomposition_sample(std::span<const double> lw, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("decomposition_sample: alpha must lie in [0, 1)");
  }
  if (lw.empty()) throw std::invalid_argument("decomposition_sample: N must be >= 1");
  const double top = *std::max_element(lw.begin(), lw.end());
  GapDecomposition out;
  out.t_stat = t_statistic(lw, alpha);
  out.delta_max = top + std::log(static_cast<double>(lw.size())) / (alpha - 1.0);
  out.r_term = std::log1p(out.t_stat) / (1.0 - alpha);
  return out;
}

}  // namespace vriwae
