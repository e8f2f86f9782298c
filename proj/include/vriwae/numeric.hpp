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

#ifndef VRIWAE_NUMERIC_HPP
#define VRIWAE_NUMERIC_HPP

#include <span>
#include <vector>

namespace vriwae {

/// log(sum(exp(scale * x))) with max subtraction. Empty input gives -inf.
double log_sum_exp(std::span<const double> x, double scale = 1.0);

/// softmax(scale * x) written into `out`; sizes must match.
void softmax(std::span<const double> x, double scale, std::span<double> out);

std::vector<double> softmax(std::span<const double> x, double scale = 1.0);

/// Sample mean and unbiased sample standard deviation (0 for a single value).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(std::span<const double> x);

/// Pearson correlation of two equally sized samples.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace vriwae

#endif  // VRIWAE_NUMERIC_HPP
