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

#ifndef VRIWAE_ASYMPTOTICS_HPP
#define VRIWAE_ASYMPTOTICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

/**
 * \file
 * \brief Predicted gap curves and their one-constant least-squares fits.
 *
 * Three families, each base(N) + c * shape(N):
 *
 *   thm3:      error_term - gamma2 / (2N)              + c1 / N
 *   lognormal: -B^2/2 + B sqrt(2 log N) + log N/(alpha-1) + c2 B loglog N / sqrt(log N)
 *   thm6:      -d a + sqrt(d) sigma sqrt(2 log N)      + c2 sqrt(d) loglog N / sqrt(log N)
 *
 * The last two need N >= 3 so that log log N is positive.
 */

namespace vriwae {

/// Euler-Mascheroni constant, 12 significant digits.
inline constexpr double kEulerGamma = 0.577215664901;

double thm3_curve(double n, double error_term, double gamma2, double c1);
double lognormal_curve(double n, double bd, double alpha, double c2);
double thm6_curve(double n, double d, double a_const, double sigma, double c2);

/// E(min of N i.i.d. standard normals): crude -sqrt(2 log N), or the refined
/// Gumbel approximation -(b_N + gamma a_N) with a_N = 1/sqrt(2 log N) and
/// b_N = sqrt(2 log N) - (log log N + log 4 pi) / (2 sqrt(2 log N)). N >= 3.
double expected_min_normal(std::size_t n, bool refined);

struct ConstantFit {
  double c = 0.0;
  double rms_residual = 0.0;
};

/// Least squares for observed ~ base + c * shape. An identically zero shape
/// leaves the constant unidentified; c = 0 is returned then.
ConstantFit fit_constant(std::span<const double> base, std::span<const double> shape,
                         std::span<const double> observed);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  ///< 0 for two points
  double slope_lo = 0.0;  ///< 95% t interval; equals slope for two points
  double slope_hi = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares; log_x must be strictly increasing with >= 2 points.
SlopeFit slope_fit(std::span<const double> log_x, std::span<const double> log_y);

enum class CurveFamily { kThm3, kLognormal, kThm6 };

std::string_view to_string(CurveFamily family);

/// A curve family with its fixed parameters and (after fit) the free constant.
class AsymptoticCurve {
 public:
  static AsymptoticCurve thm3(double error_term, double gamma2);
  static AsymptoticCurve lognormal(double bd, double alpha);
  static AsymptoticCurve thm6(double d, double a_const, double sigma);

  [[nodiscard]] CurveFamily family() const { return family_; }
  [[nodiscard]] const std::optional<double>& fitted_constant() const { return fitted_; }

  /// Smallest N where the family is defined.
  [[nodiscard]] double min_n() const;
  [[nodiscard]] double base(double n) const;
  [[nodiscard]] double shape(double n) const;
  /// base + c * shape with the fitted constant (0 before fitting); NaN below min_n().
  [[nodiscard]] double evaluate(double n) const;

  /// Fits the constant over the grid points where the family is defined.
  /// Throws when fewer than one usable point remains.
  ConstantFit fit(std::span<const double> n_grid, std::span<const double> observed);

 private:
  AsymptoticCurve(CurveFamily family, double p0, double p1, double p2)
      : family_{family}, p0_{p0}, p1_{p1}, p2_{p2} {}

  CurveFamily family_;
  double p0_, p1_, p2_;
  std::optional<double> fitted_;
};

}  // namespace vriwae

#endif  // VRIWAE_ASYMPTOTICS_HPP
