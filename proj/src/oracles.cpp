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

#include "vriwae/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace vriwae::oracle {

namespace {

double log_normal_pdf(double u, double mean, double variance) {
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) -
         0.5 * (u - mean) * (u - mean) / variance;
}

// Splits [a, b] into panels so the adaptive rule cannot miss a narrow peak.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  double total = 0.0;
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    total += integrate(f, a + i * width, a + (i + 1) * width);
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tolerance);
}

double lingauss_log_power_moment(const LinGaussParams& p, double power) {
  const std::size_t d = p.theta.size();
  if (p.a_tilde.size() != d || p.b.size() != d || p.x.size() != d) {
    throw std::invalid_argument("lingauss_log_power_moment: dimension mismatch");
  }
  constexpr double q_var = 2.0 / 3.0;
  double log_total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double mean_q = p.a_tilde[i] * p.x[i] + p.b[i];
    // log p(z|x) - log q(z|x) with p(z|x) = N((theta + x)/2, 1/2).
    const double posterior_mean = 0.5 * (p.theta[i] + p.x[i]);
    const auto integrand = [&](double u) {
      const double log_w = log_normal_pdf(u, posterior_mean, 0.5) - log_normal_pdf(u, mean_q, q_var);
      return std::exp(log_normal_pdf(u, mean_q, q_var) + power * log_w);
    };
    const double half_width = 12.0 * std::sqrt(q_var) + 2.0 * std::abs(posterior_mean - mean_q);
    log_total += std::log(integrate_panels(integrand, mean_q - half_width, mean_q + half_width, 16));
  }
  return log_total;
}

double lingauss_log_marginal_1d(double theta, double x) {
  const auto joint = [&](double z) {
    return std::exp(log_normal_pdf(z, theta, 1.0) + log_normal_pdf(x, z, 1.0));
  };
  const double centre = 0.5 * (theta + x);
  return std::log(integrate_panels(joint, centre - 15.0, centre + 15.0, 16));
}

double toy_log_power_moment(double bd, double power) {
  const auto integrand = [&](double s) {
    return std::exp(log_normal_pdf(s, 0.0, 1.0) + power * (-0.5 * bd * bd - bd * s));
  };
  // The integrand is a Gaussian in s centred at -power * bd.
  const double centre = -power * bd;
  return std::log(integrate_panels(integrand, centre - 14.0, centre + 14.0, 16));
}

MomentClosedForms lingauss_moment_forms(const LinGaussParams& params, double alpha) {
  const double beta = 1.0 - alpha;
  const double m1 = lingauss_log_power_moment(params, beta);
  const double m2 = lingauss_log_power_moment(params, 2.0 * beta);
  return {m1 / beta, std::expm1(m2 - 2.0 * m1) / beta};
}

MomentClosedForms toy_moment_forms(double bd, double alpha) {
  const double beta = 1.0 - alpha;
  const double m1 = toy_log_power_moment(bd, beta);
  const double m2 = toy_log_power_moment(bd, 2.0 * beta);
  return {m1 / beta, std::expm1(m2 - 2.0 * m1) / beta};
}

double expected_min_normal_exact(std::size_t n) {
  if (n == 0) throw std::invalid_argument("expected_min_normal_exact: N must be >= 1");
  const double count = static_cast<double>(n);
  const auto integrand = [&](double u) {
    // density of the minimum: N phi(u) (1 - Phi(u))^(N-1)
    const double survival = 0.5 * std::erfc(u / std::numbers::sqrt2);
    if (survival <= 0.0) return 0.0;
    return u * std::exp(std::log(count) + log_normal_pdf(u, 0.0, 1.0) +
                        (count - 1.0) * std::log(survival));
  };
  return integrate_panels(integrand, -12.0, 9.0, 64);
}

}  // namespace vriwae::oracle
