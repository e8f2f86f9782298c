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

// Acceptance checks. Prints one PASS/FAIL line per criterion (with indented
// sub-lines for multi-part criteria) and exits non-zero if any fails.
//
//   acceptance               run all criteria
//   acceptance --criterion 4 run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vriwae/asymptotics.hpp"
#include "vriwae/bounds.hpp"
#include "vriwae/experiments.hpp"
#include "vriwae/gradients.hpp"
#include "vriwae/models.hpp"
#include "vriwae/numeric.hpp"
#include "vriwae/oracles.hpp"
#include "vriwae/rng.hpp"
#include "vriwae/weights.hpp"

namespace {

using namespace vriwae;

// Tolerances and limits, one block per criterion.
namespace tol {
constexpr std::size_t kC1Batches = 10000;
constexpr double kC1Iwae = 1e-12;
constexpr double kC1Elbo = 1e-6;
constexpr double kC1Identity = 1e-10;
constexpr double kC1RuntimeS = 10;

constexpr std::size_t kC2Replicates = 200000;
constexpr double kC2Se = 3.0;
constexpr double kC2RuntimeS = 120;

constexpr std::size_t kC3Replicates = 100000;
constexpr double kC3Se = 3.0;
constexpr double kC3Floor = 0.002;
constexpr double kC3Rms = 0.002;
constexpr double kC3RuntimeS = 60;

constexpr double kC4Band = 0.15;
constexpr double kC4RelRms = 0.02;
constexpr double kC4RuntimeS = 120;

constexpr double kC5Band = 0.15;
constexpr double kC5RelRms = 0.03;
constexpr double kC5RuntimeS = 120;

constexpr double kC6ThetaLo = 0.3, kC6ThetaHi = 0.7;
constexpr double kC6Alpha0Lo = -0.8, kC6Alpha0Hi = -0.2;
constexpr double kC6AlphaHalfLo = 0.2, kC6AlphaHalfHi = 0.8;
constexpr double kC6RuntimeS = 120;

constexpr std::size_t kC7N = 10000;
constexpr std::size_t kC7Replicates = 500;
constexpr double kC7Refined = -3.8729;
constexpr double kC7Crude = -4.2919;
constexpr double kC7RefinedTol = 0.05;
constexpr double kC7CrudeTol = 0.5;
constexpr double kC7RuntimeS = 10;

constexpr double kC8TMax = 0.5;
constexpr double kC8ShareMin = 0.7;
constexpr double kC8RuntimeS = 30;

constexpr std::size_t kC9Settings = 20;
constexpr double kC9RelErr = 1e-6;
// Absolute check where the reference is zero (the alpha = 0 gap).
constexpr double kC9ZeroRef = 1e-9;
constexpr double kC9AbsErr = 1e-12;
constexpr double kC9RuntimeS = 30;

constexpr double kC10LinGauss = 0.99;
constexpr double kC10Toy = 0.999;
constexpr double kC10RuntimeS = 30;

constexpr double kC11Final = 0.05;
constexpr double kC11RuntimeS = 180;
}  // namespace tol

struct Outcome {
  bool passed = true;
  std::vector<std::string> lines;  // sub-results, already prefixed

  void part(const std::string& label, bool ok, const std::string& detail) {
    passed = passed && ok;
    lines.push_back(std::string{ok ? "PASS " : "FAIL "} + label + ": " + detail);
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

RngStream acceptance_stream(std::uint64_t criterion, std::uint64_t cell = 0) {
  return RngStream{0, derive_stream_id(StreamPurpose::kSelftest, (criterion << 32) | cell)};
}

// 1: algebraic invariants on random batches.
Outcome criterion1() {
  Outcome out;
  RngStream stream = acceptance_stream(1);
  std::size_t monotone = 0, iwae = 0, elbo = 0, identity = 0, range = 0;
  for (std::size_t b = 0; b < tol::kC1Batches; ++b) {
    const std::size_t n = 1 + stream.next_u32() % 64;
    std::vector<double> lw(n);
    for (double& v : lw) v = -50.0 + 100.0 * stream.uniform();
    const double v0 = vr_iwae_sample(lw, 0.0);
    if (std::abs(v0 - (log_sum_exp(lw) - std::log(static_cast<double>(n)))) > tol::kC1Iwae) ++iwae;
    double previous = v0;
    for (int k = 1; k <= 9; ++k) {
      const double v = vr_iwae_sample(lw, 0.1 * k);
      if (v > previous) ++monotone;
      previous = v;
    }
    if (std::abs(vr_iwae_sample(lw, 1.0 - 1e-9) - elbo_sample(lw)) > tol::kC1Elbo) ++elbo;
    for (int k = 0; k <= 9; ++k) {
      const double alpha = 0.1 * k;
      const auto dec = decomposition_sample(lw, alpha);
      const double gap = vr_iwae_sample(lw, alpha);
      if (std::abs(dec.delta_max + dec.r_term - gap) > tol::kC1Identity) ++identity;
      if (dec.r_term < 0.0 || dec.r_term > dec.t_stat / (1.0 - alpha)) ++range;
    }
  }
  out.part("1 monotone", monotone == 0, std::to_string(monotone) + " violations");
  out.part("1 iwae", iwae == 0, std::to_string(iwae) + " violations");
  out.part("1 elbo_limit", elbo == 0, std::to_string(elbo) + " violations");
  out.part("1 identity", identity == 0, std::to_string(identity) + " violations");
  out.part("1 r_range", range == 0, std::to_string(range) + " violations");
  return out;
}

// 2: rep, drep and finite-difference means agree pairwise.
Outcome criterion2() {
  Outcome out;
  const Model toy{GaussianToy{std::vector<double>(5, 0.0), std::vector<double>(5, 0.5)}};
  const Model lg = make_linear_gaussian_setup(3, 0.5, 0).model;
  const std::vector<std::pair<std::string, const Model*>> models{{"toy", &toy}, {"lingauss", &lg}};
  std::uint64_t cell = 0;
  for (const auto& [name, model] : models) {
    for (double alpha : {0.0, 0.3, 0.7}) {
      for (std::size_t n : {1u, 8u}) {
        const RngStream stream = acceptance_stream(2, cell++);
        const auto means = gradient_means(*model, alpha, n, tol::kC2Replicates, stream);
        const auto fd = fd_grad_oracle(*model, alpha, n, kDefaultFdStep, tol::kC2Replicates, stream);
        double worst = 0.0;
        const auto compare = [&](const GradientEstimate& a, const GradientEstimate& b) {
          for (std::size_t k = 0; k < a.mean.size(); ++k) {
            const double se = std::hypot(a.std_error[k], b.std_error[k]);
            const double z = se > 0.0 ? std::abs(a.mean[k] - b.mean[k]) / se
                                      : (a.mean[k] == b.mean[k] ? 0.0 : INFINITY);
            worst = std::max(worst, z);
          }
        };
        compare(means.rep, means.drep);
        compare(means.rep, fd);
        compare(means.drep, fd);
        out.part("2 " + name + " alpha=" + fmt(alpha) + " N=" + std::to_string(n),
                 worst <= tol::kC2Se, "max |diff|/se = " + fmt(worst));
      }
    }
  }
  return out;
}

// 3: small-gap regime on the toy with B = 1.
Outcome criterion3() {
  Outcome out;
  const Model model = make_toy(1);
  std::uint64_t cell = 0;
  for (double alpha : {0.0, 0.5}) {
    const auto an = toy_analytics(alpha, model.bd2());
    std::vector<double> n_values, observed;
    for (std::size_t n : {64u, 256u, 1024u}) {
      const auto est = gap_mc(model, alpha, n, tol::kC3Replicates, acceptance_stream(3, cell++));
      const double predicted = an.vr_gap - an.gamma2 / (2.0 * static_cast<double>(n));
      const double allowed = std::max(tol::kC3Se * est.std_error, tol::kC3Floor);
      out.part("3 alpha=" + fmt(alpha) + " N=" + std::to_string(n),
               std::abs(est.mean - predicted) <= allowed,
               "gap " + fmt(est.mean) + " predicted " + fmt(predicted) + " allowed " + fmt(allowed));
      n_values.push_back(static_cast<double>(n));
      observed.push_back(est.mean);
    }
    auto curve = AsymptoticCurve::thm3(an.vr_gap, an.gamma2);
    const auto fit = curve.fit(n_values, observed);
    out.part("3 alpha=" + fmt(alpha) + " fit", fit.rms_residual < tol::kC3Rms,
             "c1 " + fmt(fit.c) + " rms " + fmt(fit.rms_residual));
  }
  return out;
}

ExperimentSpec gap_spec(ModelKind model, std::vector<double> alphas, std::vector<double> sigmas) {
  ExperimentSpec spec;
  spec.model = model;
  spec.alphas = std::move(alphas);
  spec.dims = {1000};
  spec.sigma_perturb = std::move(sigmas);
  spec.replicates = 1000;
  return spec;
}

// 4: weight collapse on the toy at d = 1000.
Outcome criterion4() {
  Outcome out;
  const auto table = run_gap_experiment(gap_spec(ModelKind::kToy, {0.0, 0.2, 0.5}, {0.0}));
  const double elbo_gap = -500.0;
  for (double alpha : {0.0, 0.2, 0.5}) {
    double worst = 0.0, rel_rms = NAN;
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (table.number(r, "alpha") != alpha) continue;
      worst = std::max(worst, std::abs(table.number(r, "mean_gap") - elbo_gap) / std::abs(elbo_gap));
      rel_rms = table.number(r, "rel_rms_asym");
    }
    out.part("4a alpha=" + fmt(alpha), worst <= tol::kC4Band,
             "max relative distance from -d/2 = " + fmt(worst));
    out.part("4b alpha=" + fmt(alpha), rel_rms < tol::kC4RelRms, "relative rms = " + fmt(rel_rms));
  }
  return out;
}

// 5: general log-normal regime on the linear Gaussian at d = 1000.
Outcome criterion5() {
  Outcome out;
  const auto table =
      run_gap_experiment(gap_spec(ModelKind::kLinearGaussian, {0.0, 0.5}, {0.0, 0.01}));
  for (double sigma : {0.0, 0.01}) {
    for (double alpha : {0.0, 0.5}) {
      double worst = 0.0, rel_rms = NAN, target = NAN;
      for (std::size_t r = 0; r < table.size(); ++r) {
        if (table.number(r, "alpha") != alpha || table.number(r, "sigma_perturb") != sigma) continue;
        target = -1000.0 * table.number(r, "a_const");
        worst = std::max(worst, std::abs(table.number(r, "mean_gap") - target) / std::abs(target));
        rel_rms = table.number(r, "rel_rms_asym");
      }
      const std::string cell = " sigma=" + fmt(sigma) + " alpha=" + fmt(alpha);
      out.part("5a" + cell, worst <= tol::kC5Band,
               "max relative distance from -d*a (" + fmt(target) + ") = " + fmt(worst));
      out.part("5b" + cell, rel_rms < tol::kC5RelRms, "relative rms = " + fmt(rel_rms));
    }
  }
  return out;
}

// 6: SNR slopes on the linear Gaussian at d = 20.
Outcome criterion6() {
  Outcome out;
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kSnr;
  spec.model = ModelKind::kLinearGaussian;
  spec.alphas = {0.0, 0.5};
  spec.dims = {20};
  spec.sigma_perturb = {0.01};
  spec.estimators = {EstimatorKind::kRep};
  const auto table = run_snr_experiment(spec);
  for (double alpha : {0.0, 0.5}) {
    double theta = NAN, phi = NAN;
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (table.number(r, "alpha") != alpha) continue;
      (table.text(r, "block") == "theta" ? theta : phi) = table.number(r, "slope");
    }
    out.part("6 theta alpha=" + fmt(alpha), theta >= tol::kC6ThetaLo && theta <= tol::kC6ThetaHi,
             "slope " + fmt(theta));
    const double lo = alpha == 0.0 ? tol::kC6Alpha0Lo : tol::kC6AlphaHalfLo;
    const double hi = alpha == 0.0 ? tol::kC6Alpha0Hi : tol::kC6AlphaHalfHi;
    out.part("6 phi rep alpha=" + fmt(alpha), phi >= lo && phi <= hi,
             "slope " + fmt(phi) + " band [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  return out;
}

// 7: expected minimum of standard normals.
Outcome criterion7() {
  Outcome out;
  RngStream stream = acceptance_stream(7);
  double total = 0.0;
  for (std::size_t r = 0; r < tol::kC7Replicates; ++r) {
    double lowest = INFINITY;
    for (std::size_t i = 0; i < tol::kC7N; ++i) lowest = std::min(lowest, stream.normal());
    total += lowest;
  }
  const double mean = total / static_cast<double>(tol::kC7Replicates);
  const double refined = expected_min_normal(tol::kC7N, true);
  const double crude = expected_min_normal(tol::kC7N, false);
  out.part("7 refined", std::abs(mean - tol::kC7Refined) <= tol::kC7RefinedTol &&
                            std::abs(refined - tol::kC7Refined) < 5e-5,
           "sample mean " + fmt(mean) + " refined " + fmt(refined));
  out.part("7 crude", std::abs(mean - tol::kC7Crude) <= tol::kC7CrudeTol &&
                          std::abs(crude - tol::kC7Crude) < 5e-5,
           "sample mean " + fmt(mean) + " crude " + fmt(crude));
  return out;
}

// 8: collapse diagnostics on the toy with B_d = sqrt(d).
Outcome criterion8() {
  Outcome out;
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kCollapse;
  spec.alphas = {0.0};
  spec.n_grid = {128};
  const auto table = run_collapse_experiment(spec);
  std::vector<double> t, share;
  for (std::size_t r = 0; r < table.size(); ++r) {
    t.push_back(table.number(r, "t_mean"));
    share.push_back(table.number(r, "max_share_mean"));
  }
  const bool decreasing = t.size() == 3 && t[0] > t[1] && t[1] > t[2];
  out.part("8 decreasing", decreasing, "T = " + fmt(t[0]) + ", " + fmt(t[1]) + ", " + fmt(t[2]));
  out.part("8 d=1000", t.back() < tol::kC8TMax && share.back() > tol::kC8ShareMin,
           "T " + fmt(t.back()) + " max share " + fmt(share.back()));
  return out;
}

// 9: closed forms against quadrature.
Outcome criterion9() {
  Outcome out;
  RngStream stream = acceptance_stream(9);
  double worst = 0.0;
  std::size_t zero_failures = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t s = 0; s < tol::kC9Settings; ++s) {
      LinearGaussian lg;
      for (std::size_t i = 0; i < d; ++i) {
        lg.theta.push_back(stream.normal());
        lg.a_tilde.push_back(0.5 + 0.3 * stream.normal());
        lg.b.push_back(0.3 * stream.normal());
        lg.x.push_back(std::sqrt(2.0) * stream.normal());
      }
      const Model model{lg};
      for (double alpha : {0.0, 0.3, 0.7}) {
        const auto closed = lingauss_analytics(model, alpha);
        const auto quad = oracle::lingauss_moment_forms({lg.theta, lg.a_tilde, lg.b, lg.x}, alpha);
        for (const auto& [value, ref] : {std::pair{closed.vr_gap, quad.vr_gap},
                                         std::pair{closed.gamma2, quad.gamma2}}) {
          if (std::abs(ref) < tol::kC9ZeroRef) {
            if (std::abs(value - ref) > tol::kC9AbsErr) ++zero_failures;
          } else {
            worst = std::max(worst, std::abs(value - ref) / std::abs(ref));
          }
        }
      }
    }
  }
  out.part("9", worst < tol::kC9RelErr && zero_failures == 0,
           "max relative error " + fmt(worst) + ", zero-reference failures " +
               std::to_string(zero_failures));
  return out;
}

// 10: log-normality of the weights.
Outcome criterion10() {
  Outcome out;
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kWeights;
  spec.model = ModelKind::kLinearGaussian;
  spec.dims = {1000};
  spec.sigma_perturb = {0.0};
  const auto lg = run_weights_experiment(spec);
  const double lg_qq = lg.summary.number(0, "qq_corr");
  out.part("10 lingauss d=1000", lg_qq > tol::kC10LinGauss, "qq " + fmt(lg_qq));
  spec.model = ModelKind::kToy;
  spec.dims = {10, 1000};
  const auto toy = run_weights_experiment(spec);
  double toy_min = 1.0;
  for (std::size_t r = 0; r < toy.summary.size(); ++r) {
    toy_min = std::min(toy_min, toy.summary.number(r, "qq_corr"));
  }
  out.part("10 toy", toy_min > tol::kC10Toy, "min qq " + fmt(toy_min));
  return out;
}

// 11: training drives B_d^2/d down.
Outcome criterion11() {
  Outcome out;
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kTrain;
  spec.dims = {1000};
  const auto table = run_train_experiment(spec);
  const double first = table.number(0, "bd2_over_d");
  const double last = table.number(table.size() - 1, "bd2_over_d");
  const double epoch = table.number(table.size() - 1, "epoch");
  out.part("11", first == 1.0 && epoch == 5000.0 && last < tol::kC11Final,
           "B_d^2/d " + fmt(first) + " -> " + fmt(last) + " at epoch " + fmt(epoch));
  return out;
}

struct Criterion {
  std::function<Outcome()> run;
  double runtime_limit_s;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {criterion1, tol::kC1RuntimeS},  {criterion2, tol::kC2RuntimeS},
      {criterion3, tol::kC3RuntimeS},  {criterion4, tol::kC4RuntimeS},
      {criterion5, tol::kC5RuntimeS},  {criterion6, tol::kC6RuntimeS},
      {criterion7, tol::kC7RuntimeS},  {criterion8, tol::kC8RuntimeS},
      {criterion9, tol::kC9RuntimeS},  {criterion10, tol::kC10RuntimeS},
      {criterion11, tol::kC11RuntimeS}};

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.part(std::to_string(i + 1), false, std::string{"exception: "} + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome.part(std::to_string(i + 1) + " runtime", elapsed < criteria[i].runtime_limit_s,
                 fmt(elapsed) + " s (limit " + fmt(criteria[i].runtime_limit_s) + " s)");
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << '\n';
    for (const auto& line : outcome.lines) std::cout << "  " << line << '\n';
    std::cout.flush();
    all = all && outcome.passed;
  }
  return all ? 0 : 1;
}
