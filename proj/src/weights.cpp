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

#include "vriwae/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "vriwae/numeric.hpp"

namespace vriwae {

namespace {

void require_nonempty(std::span<const double> lw, const char* op) {
  if (lw.empty()) throw std::invalid_argument(std::string{op} + ": need at least one log-weight");
}

std::size_t argmax_first(std::span<const double> lw) {
  return static_cast<std::size_t>(std::max_element(lw.begin(), lw.end()) - lw.begin());
}

}  // namespace

LogWeights::LogWeights(std::vector<double> values, std::optional<double> log_marginal)
    : values_{std::move(values)}, log_marginal_{log_marginal} {
  if (values_.empty()) throw std::invalid_argument("LogWeights: N must be >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("LogWeights: non-finite log-weight");
  }
  if (log_marginal_ && !std::isfinite(*log_marginal_)) {
    throw std::invalid_argument("LogWeights: non-finite log marginal");
  }
}

std::vector<double> relative_log_weights(const LogWeights& lw) {
  if (!lw.log_marginal()) {
    throw std::invalid_argument("relative_log_weights: log marginal not available");
  }
  std::vector<double> out(lw.values().begin(), lw.values().end());
  for (double& v : out) v -= *lw.log_marginal();
  return out;
}

double t_statistic(std::span<const double> lw, double alpha) {
  require_nonempty(lw, "t_statistic");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("t_statistic: alpha must lie in [0, 1)");
  }
  const std::size_t top = argmax_first(lw);
  const double scale = 1.0 - alpha;
  double t = 0.0;
  for (std::size_t j = 0; j < lw.size(); ++j) {
    if (j != top) t += std::exp(scale * (lw[j] - lw[top]));
  }
  return t;
}

double t_statistic(const LogWeights& lw, double alpha) { return t_statistic(lw.values(), alpha); }

double max_weight_share(std::span<const double> lw) {
  require_nonempty(lw, "max_weight_share");
  return std::exp(lw[argmax_first(lw)] - log_sum_exp(lw));
}

double max_weight_share(const LogWeights& lw) { return max_weight_share(lw.values()); }

double ess(std::span<const double> lw) {
  require_nonempty(lw, "ess");
  const double value = std::exp(2.0 * log_sum_exp(lw) - log_sum_exp(lw, 2.0));
  return std::clamp(value, 1.0, static_cast<double>(lw.size()));
}

double ess(const LogWeights& lw) { return ess(lw.values()); }

QQResult qq_points(std::span<const double> lw) {
  if (lw.size() < 2) throw std::invalid_argument("qq_points: need at least two values");
  const auto [mean, sd] = mean_std(lw);
  if (!(sd > 0.0)) throw std::invalid_argument("qq_points: zero sample variance");

  std::vector<double> sample(lw.begin(), lw.end());
  std::sort(sample.begin(), sample.end());

  const boost::math::normal_distribution<double> standard;
  const double n = static_cast<double>(sample.size());
  std::vector<double> theoretical(sample.size());
  QQResult result;
  result.points.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    theoretical[i] = boost::math::quantile(standard, (static_cast<double>(i) + 0.5) / n);
    sample[i] = (sample[i] - mean) / sd;
    result.points.emplace_back(theoretical[i], sample[i]);
  }
  result.correlation = pearson_correlation(theoretical, sample);
  return result;
}

LogWeightMoments log_weight_moments(std::span<const double> lw) {
  if (lw.size() < 2) throw std::invalid_argument("log_weight_moments: need at least two values");
  const auto [mean, sd] = mean_std(lw);
  return {mean, sd};
}

WeightDiagnostics diagnose(std::span<const double> lw, double alpha) {
  WeightDiagnostics out;
  out.t_stat = t_statistic(lw, alpha);
  out.max_share = max_weight_share(lw);
  out.ess = ess(lw);
  const auto [mean, sd] = mean_std(lw);
  out.log_mean = mean;
  out.log_std = sd;
  return out;
}

}  // namespace vriwae
