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

#include "vriwae/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace vriwae {

namespace {

void require_log_domain(double n, const char* op) {
  if (!(n >= 3.0)) throw std::invalid_argument(std::string{op} + ": N must be >= 3");
}

// log log N / sqrt(log N)
double loglog_shape(double n) {
  const double log_n = std::log(n);
  return std::log(log_n) / std::sqrt(log_n);
}

}  // namespace

double thm3_curve(double n, double error_term, double gamma2, double c1) {
  if (!(n >= 1.0)) throw std::invalid_argument("thm3_curve: N must be >= 1");
  return error_term - gamma2 / (2.0 * n) + c1 / n;
}

double lognormal_curve(double n, double bd, double alpha, double c2) {
  require_log_domain(n, "lognormal_curve");
  const double log_n = std::log(n);
  return -0.5 * bd * bd + bd * std::sqrt(2.0 * log_n) + log_n / (alpha - 1.0) +
         c2 * bd * loglog_shape(n);
}

double thm6_curve(double n, double d, double a_const, double sigma, double c2) {
  require_log_domain(n, "thm6_curve");
  const double root_d = std::sqrt(d);
  return -d * a_const + root_d * sigma * std::sqrt(2.0 * std::log(n)) +
         c2 * root_d * loglog_shape(n);
}

double expected_min_normal(std::size_t n, bool refined) {
  require_log_domain(static_cast<double>(n), "expected_min_normal");
  const double root = std::sqrt(2.0 * std::log(static_cast<double>(n)));
  if (!refined) return -root;
  const double a_n = 1.0 / root;
  const double b_n =
      root - (std::log(std::log(static_cast<double>(n))) + std::log(4.0 * std::numbers::pi)) /
                 (2.0 * root);
  return -(b_n + kEulerGamma * a_n);
}

ConstantFit fit_constant(std::span<const double> base, std::span<const double> shape,
                         std::span<const double> observed) {
  if (base.empty() || base.size() != shape.size() || base.size() != observed.size()) {
    throw std::invalid_argument("fit_constant: need equal, non-empty inputs");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    num += shape[i] * (observed[i] - base[i]);
    den += shape[i] * shape[i];
  }
  ConstantFit out;
  out.c = den == 0.0 ? 0.0 : num / den;
  double ss = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double r = observed[i] - base[i] - out.c * shape[i];
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / static_cast<double>(base.size()));
  return out;
}

SlopeFit slope_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope_fit: need two equal samples of size >= 2");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("slope_fit: x must be strictly increasing");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit out;
  out.points = x.size();
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.slope_lo = out.slope_hi = out.slope;
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - out.intercept - out.slope * x[i];
      sse += r * r;
    }
    out.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t_distribution<double> t{n - 2.0};
    const double q = boost::math::quantile(boost::math::complement(t, 0.025));
    out.slope_lo = out.slope - q * out.slope_se;
    out.slope_hi = out.slope + q * out.slope_se;
  }
  return out;
}

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::kThm3:
      return "thm3";
    case CurveFamily::kLognormal:
      return "thm4_5_lognormal";
    case CurveFamily::kThm6:
      return "thm6_general";
  }
  return "?";
}

AsymptoticCurve AsymptoticCurve::thm3(double error_term, double gamma2) {
  return {CurveFamily::kThm3, error_term, gamma2, 0.0};
}

AsymptoticCurve AsymptoticCurve::lognormal(double bd, double alpha) {
  return {CurveFamily::kLognormal, bd, alpha, 0.0};
}

AsymptoticCurve AsymptoticCurve::thm6(double d, double a_const, double sigma) {
  return {CurveFamily::kThm6, d, a_const, sigma};
}

double AsymptoticCurve::min_n() const { return family_ == CurveFamily::kThm3 ? 1.0 : 3.0; }

double AsymptoticCurve::base(double n) const {
  switch (family_) {
    case CurveFamily::kThm3:
      return thm3_curve(n, p0_, p1_, 0.0);
    case CurveFamily::kLognormal:
      return lognormal_curve(n, p0_, p1_, 0.0);
    case CurveFamily::kThm6:
      return thm6_curve(n, p0_, p1_, p2_, 0.0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double AsymptoticCurve::shape(double n) const {
  switch (family_) {
    case CurveFamily::kThm3:
      return 1.0 / n;
    case CurveFamily::kLognormal:
      return p0_ * loglog_shape(n);
    case CurveFamily::kThm6:
      return std::sqrt(p0_) * loglog_shape(n);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double AsymptoticCurve::evaluate(double n) const {
  if (n < min_n()) return std::numeric_limits<double>::quiet_NaN();
  return base(n) + fitted_.value_or(0.0) * shape(n);
}

ConstantFit AsymptoticCurve::fit(std::span<const double> n_grid, std::span<const double> observed) {
  if (n_grid.size() != observed.size()) throw std::invalid_argument("AsymptoticCurve::fit: size mismatch");
  std::vector<double> base_values, shape_values, targets;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < min_n()) continue;
    const double b = base(n_grid[i]);
    if (!std::isfinite(b) || !std::isfinite(observed[i])) continue;
    base_values.push_back(b);
    shape_values.push_back(shape(n_grid[i]));
    targets.push_back(observed[i]);
  }
  if (targets.empty()) throw std::invalid_argument("AsymptoticCurve::fit: no usable grid points");
  const ConstantFit result = fit_constant(base_values, shape_values, targets);
  fitted_ = result.c;
  return result;
}

}  // namespace vriwae
