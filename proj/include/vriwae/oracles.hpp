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

#ifndef VRIWAE_ORACLES_HPP
#define VRIWAE_ORACLES_HPP

#include <cstddef>
#include <functional>
#include <span>

/**
 * \file
 * \brief Independent numerical oracles for the closed forms.
 *
 * Nothing here calls into the model or asymptotics code: the integrands are
 * written out from the densities directly so that a transcription error in a
 * closed form cannot be reproduced by its check.
 */

namespace vriwae::oracle {

/// Adaptive Gauss-Kronrod (61-point) quadrature of f on [a, b] with a
/// relative error target.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-13);

/// Parameters of the linear Gaussian written as plain vectors.
struct LinGaussParams {
  std::span<const double> theta;
  std::span<const double> a_tilde;
  std::span<const double> b;
  std::span<const double> x;
};

/// log E_q[wbar^power] for the linear Gaussian, by one 1-D quadrature per
/// coordinate (the integrand factorizes across coordinates).
double lingauss_log_power_moment(const LinGaussParams& params, double power);

/// log of the integral of p_theta(x, z) over z for d = 1.
double lingauss_log_marginal_1d(double theta, double x);

/// log E[wbar^power] for log wbar = -B^2/2 - B S, S ~ N(0, 1), by quadrature in S.
double toy_log_power_moment(double bd, double power);

/// Bound gap and gamma^2 derived from power moments:
/// gap = log E[w^(1-alpha)] / (1-alpha),
/// gamma^2 = (E[w^(2(1-alpha))] / E[w^(1-alpha)]^2 - 1) / (1-alpha).
struct MomentClosedForms {
  double vr_gap = 0.0;
  double gamma2 = 0.0;
};

MomentClosedForms lingauss_moment_forms(const LinGaussParams& params, double alpha);
MomentClosedForms toy_moment_forms(double bd, double alpha);

/// E(min of N i.i.d. standard normals) by quadrature of the order-statistic density.
double expected_min_normal_exact(std::size_t n);

}  // namespace vriwae::oracle

#endif  // VRIWAE_ORACLES_HPP
