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

#ifndef VRIWAE_WEIGHTS_HPP
#define VRIWAE_WEIGHTS_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

/**
 * \file
 * \brief Importance log-weights and collapse diagnostics.
 *
 * All arithmetic happens in the log domain with max subtraction: in
 * high-dimensional regimes the weights span e^{+-hundreds}.
 */

namespace vriwae {

/// A batch of N >= 1 finite log-weights (nats), optionally with the exact log
/// normalizer l such that values_i - l are the log relative weights.
class LogWeights {
 public:
  explicit LogWeights(std::vector<double> values,
                      std::optional<double> log_marginal = std::nullopt);

  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::optional<double>& log_marginal() const { return log_marginal_; }

 private:
  std::vector<double> values_;
  std::optional<double> log_marginal_;
};

struct WeightDiagnostics {
  double t_stat = 0.0;
  double max_share = 0.0;
  double ess = 0.0;
  double log_mean = 0.0;
  double log_std = 0.0;
};

/// values_i - log_marginal, order preserved. Throws if the marginal is absent.
std::vector<double> relative_log_weights(const LogWeights& lw);

/// sum_{j != max} (w_j / w_max)^{1-alpha}, alpha in [0, 1). The maximum is the
/// first occurrence of the largest value. Shift invariant; lies in [0, N-1].
double t_statistic(std::span<const double> log_weights, double alpha);
double t_statistic(const LogWeights& lw, double alpha);

/// w_max / sum_j w_j.
double max_weight_share(std::span<const double> log_weights);
double max_weight_share(const LogWeights& lw);

/// (sum w)^2 / sum w^2, in [1, N].
double ess(std::span<const double> log_weights);
double ess(const LogWeights& lw);

struct QQResult {
  /// (theoretical standard-normal quantile, standardized sample quantile)
  std::vector<std::pair<double, double>> points;
  double correlation = 0.0;
};

/// Normal QQ data at plotting positions (i - 0.5) / n. The sample is sorted
/// and standardized with its mean and unbiased standard deviation.
/// Throws for fewer than two values or zero variance.
QQResult qq_points(std::span<const double> log_weights);

struct LogWeightMoments {
  double mean = 0.0;
  double std = 0.0;
};

/// Sample mean and unbiased standard deviation; requires two or more values.
LogWeightMoments log_weight_moments(std::span<const double> log_weights);

/// All diagnostics at once (log_std is 0 for a single weight).
WeightDiagnostics diagnose(std::span<const double> log_weights, double alpha);

}  // namespace vriwae

#endif  // VRIWAE_WEIGHTS_HPP
