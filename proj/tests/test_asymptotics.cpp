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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "property.hpp"
#include "vriwae/asymptotics.hpp"
#include "vriwae/oracles.hpp"
#include "vriwae/rng.hpp"

namespace vriwae {
namespace {

TEST(Curves, HandValues) {
  EXPECT_NEAR(thm3_curve(4.0, -0.5, 2.0, 0.0), -0.75, 1e-15);
  EXPECT_NEAR(thm3_curve(4.0, -0.5, 2.0, 1.0), -0.5, 1e-15);

  const double b = std::sqrt(1000.0);
  EXPECT_NEAR(lognormal_curve(512.0, b, 0.0, 0.0), -394.54, 0.01);
  const double log_n = std::log(512.0);
  EXPECT_NEAR(lognormal_curve(512.0, b, 0.5, 1.0) - lognormal_curve(512.0, b, 0.5, 0.0),
              b * std::log(log_n) / std::sqrt(log_n), 1e-10);
  EXPECT_NEAR(lognormal_curve(512.0, b, 0.5, 0.0) - lognormal_curve(512.0, b, 0.0, 0.0), -log_n,
              1e-10);

  EXPECT_NEAR(thm6_curve(100.0, 1000.0, 0.02, 0.2, 0.0),
              -20.0 + std::sqrt(1000.0) * 0.2 * std::sqrt(2.0 * std::log(100.0)), 1e-12);
}

TEST(Curves, UndefinedBelowThree) {
  EXPECT_THROW(lognormal_curve(2.0, 1.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(thm6_curve(2.0, 10.0, 0.1, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(thm3_curve(0.5, 0.0, 1.0, 0.0), std::invalid_argument);
  auto curve = AsymptoticCurve::lognormal(3.0, 0.2);
  EXPECT_TRUE(std::isnan(curve.evaluate(2.0)));
  EXPECT_FALSE(std::isnan(curve.evaluate(3.0)));
  EXPECT_EQ(curve.min_n(), 3.0);
  EXPECT_EQ(AsymptoticCurve::thm3(0.0, 1.0).min_n(), 1.0);
}

TEST(ExpectedMin, Values) {
  EXPECT_NEAR(expected_min_normal(10000, false), -4.2919, 1e-4);
  EXPECT_NEAR(expected_min_normal(10000, true), -3.8729, 1e-4);
  EXPECT_THROW(expected_min_normal(2, true), std::invalid_argument);
}

TEST(ExpectedMin, RefinedTracksExactOrderStatistic) {
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    const double exact = oracle::expected_min_normal_exact(n);
    EXPECT_NEAR(expected_min_normal(n, true), exact, 0.06) << n;
  }
  // Small N where the closed forms are known.
  EXPECT_NEAR(oracle::expected_min_normal_exact(1), 0.0, 1e-10);
  EXPECT_NEAR(oracle::expected_min_normal_exact(2), -1.0 / std::sqrt(M_PI), 1e-10);
}

TEST(FitConstant, RecoversPlantedConstant) {
  testing::for_all(200, 4, [](testing::Gen& gen, std::size_t) {
    const std::size_t n = gen.size(2, 12);
    std::vector<double> base(n), shape(n), observed(n);
    const double c = gen.uniform(-5.0, 5.0);
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = gen.uniform(-10.0, 10.0);
      shape[i] = gen.uniform(0.1, 3.0);
      observed[i] = base[i] + c * shape[i];
    }
    const auto fit = fit_constant(base, shape, observed);
    EXPECT_NEAR(fit.c, c, 1e-10);
    EXPECT_NEAR(fit.rms_residual, 0.0, 1e-10);
  });
}

TEST(FitConstant, ZeroShapeAndResidual) {
  const std::vector<double> base{1.0, 2.0};
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> observed{2.0, 2.0};
  const auto fit = fit_constant(base, zero, observed);
  EXPECT_EQ(fit.c, 0.0);
  EXPECT_NEAR(fit.rms_residual, std::sqrt(0.5), 1e-15);

  // Residual orthogonal to the shape leaves c untouched.
  const std::vector<double> shape{1.0, 1.0};
  const std::vector<double> obs2{1.0 + 0.5, 2.0 - 0.5};
  const auto f2 = fit_constant(base, shape, obs2);
  EXPECT_NEAR(f2.c, 0.0, 1e-15);
  EXPECT_NEAR(f2.rms_residual, 0.5, 1e-15);
  EXPECT_THROW(fit_constant(base, shape, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(AsymptoticCurve, FitSkipsUndefinedPoints) {
  const std::vector<double> n{2, 4, 16, 64};
  AsymptoticCurve truth = AsymptoticCurve::thm6(100.0, 0.05, 0.3);
  std::vector<double> observed{123.0};
  for (std::size_t i = 1; i < n.size(); ++i) observed.push_back(truth.base(n[i]) + 0.4 * truth.shape(n[i]));
  auto curve = AsymptoticCurve::thm6(100.0, 0.05, 0.3);
  EXPECT_FALSE(curve.fitted_constant().has_value());
  const auto fit = curve.fit(n, observed);
  EXPECT_NEAR(fit.c, 0.4, 1e-10);
  ASSERT_TRUE(curve.fitted_constant().has_value());
  EXPECT_NEAR(curve.evaluate(16.0), observed[2], 1e-10);
  EXPECT_EQ(to_string(curve.family()), "thm6_general");

  auto too_short = AsymptoticCurve::lognormal(1.0, 0.0);
  EXPECT_THROW(too_short.fit(std::vector<double>{2.0}, std::vector<double>{0.0}),
               std::invalid_argument);
}

TEST(SlopeFit, ExactLineAndInterval) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 1.5, 2.0, 2.5};
  const auto fit = slope_fit(x, y);
  EXPECT_NEAR(fit.slope, 0.5, 1e-15);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-15);
  EXPECT_NEAR(fit.slope_se, 0.0, 1e-15);
  EXPECT_EQ(fit.points, 4u);

  const std::vector<double> noisy{1.0, 1.7, 1.8, 2.6};
  const auto f2 = slope_fit(x, noisy);
  EXPECT_LT(f2.slope_lo, f2.slope);
  EXPECT_GT(f2.slope_hi, f2.slope);
  // 95% t quantile with 2 degrees of freedom.
  EXPECT_NEAR((f2.slope_hi - f2.slope) / f2.slope_se, 4.302652729911275, 1e-9);

  const auto two = slope_fit(std::vector<double>{0.0, 2.0}, std::vector<double>{0.0, 1.0});
  EXPECT_EQ(two.slope_lo, two.slope);
  EXPECT_THROW(slope_fit(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 1.0}),
               std::invalid_argument);
}

TEST(ExpectedMin, SamplingOracle) {
  RngStream stream{77, 1};
  double sum = 0.0;
  constexpr int kReplicates = 500;
  for (int r = 0; r < kReplicates; ++r) {
    double lowest = 1e300;
    for (int i = 0; i < 10000; ++i) lowest = std::min(lowest, stream.normal());
    sum += lowest;
  }
  EXPECT_NEAR(sum / kReplicates, expected_min_normal(10000, true), 0.05);
}

}  // namespace
}  // namespace vriwae
