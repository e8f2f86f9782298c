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

#include "vriwae/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vriwae {

double log_sum_exp(std::span<const double> x, double scale) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : x) peak = std::max(peak, scale * v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : x) sum += std::exp(scale * v - peak);
  return peak + std::log(sum);
}

void softmax(std::span<const double> x, double scale, std::span<double> out) {
  if (x.size() != out.size()) throw std::invalid_argument("softmax: size mismatch");
  const double lse = log_sum_exp(x, scale);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(scale * x[i] - lse);
}

std::vector<double> softmax(std::span<const double> x, double scale) {
  std::vector<double> out(x.size());
  softmax(x, scale, out);
  return out;
}

MeanStd mean_std(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean_std: empty sample");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  if (x.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation: need two equal samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson_correlation: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace vriwae
