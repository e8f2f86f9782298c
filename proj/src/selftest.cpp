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

#include "vriwae/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <ostream>
#include <sstream>

#include "vriwae/asymptotics.hpp"
#include "vriwae/bounds.hpp"
#include "vriwae/models.hpp"
#include "vriwae/numeric.hpp"
#include "vriwae/oracles.hpp"
#include "vriwae/parallel.hpp"
#include "vriwae/rng.hpp"
#include "vriwae/table.hpp"
#include "vriwae/weights.hpp"

namespace vriwae {

namespace {

std::size_t scaled(double base, double scale) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(base * scale)));
}

std::string describe(double value) { return format_double(value); }

class Runner {
 public:
  void check(std::string module, std::string op, std::string name,
             const std::function<std::string()>& body) {
    SelftestCheck c{std::move(module), std::move(op), std::move(name), false, {}};
    try {
      c.detail = body();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string{"exception: "} + e.what();
    }
    report.checks.push_back(std::move(c));
  }

  SelftestReport report;
};

// Random log-weight batches with N in [1, 64] and values in [-50, 50].
std::vector<double> random_batch(RngStream& stream) {
  const std::size_t n = 1 + stream.next_u32() % 64;
  std::vector<double> lw(n);
  for (double& v : lw) v = -50.0 + 100.0 * stream.uniform();
  return lw;
}

}  // namespace

bool SelftestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void SelftestReport::print(std::ostream& out) const {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.module << "::" << c.op << " " << c.name;
    if (!c.passed) out << " (" << c.detail << ")";
    out << '\n';
  }
  const auto failures = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; });
  out << (failures == 0 ? "selftest passed" : "selftest FAILED") << ": " << checks.size() - failures
      << "/" << checks.size() << " checks\n";
}

SelftestReport run_selftest(const SelftestOptions& options) {
  Runner run;
  const std::uint64_t seed = options.seed;
  const auto stream_for = [&](std::uint64_t cell) {
    return RngStream{seed, derive_stream_id(StreamPurpose::kSelftest, cell)};
  };

  run.check("rng", "philox4x32_10", "known answer", [] {
    const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    const bool ok = out[0] == 0x6627e8d5u && out[1] == 0xe169c58du && out[2] == 0xbc57ac4cu &&
                    out[3] == 0x9b00dbd8u;
    return ok ? std::string{} : std::string{"zero block mismatch"};
  });

  run.check("rng", "substream", "reproducible addressing", [&] {
    RngStream a = stream_for(1).substream(7);
    RngStream b = stream_for(1).substream(7);
    for (int i = 0; i < 100; ++i) {
      if (a.normal() != b.normal()) return std::string{"draws differ"};
    }
    return std::string{};
  });

  run.check("bounds", "vr_iwae_sample", "alpha monotone, IWAE and ELBO limits", [&] {
    RngStream stream = stream_for(2);
    const std::size_t batches = scaled(1000, options.scale);
    for (std::size_t b = 0; b < batches; ++b) {
      const auto lw = random_batch(stream);
      double previous = vr_iwae_sample(lw, 0.0);
      const double iwae = log_sum_exp(lw) - std::log(static_cast<double>(lw.size()));
      if (std::abs(previous - iwae) > 1e-12) return "IWAE mismatch " + describe(previous - iwae);
      for (int k = 1; k <= 9; ++k) {
        const double value = vr_iwae_sample(lw, 0.1 * k);
        if (value > previous + 1e-12) return std::string{"not non-increasing in alpha"};
        previous = value;
      }
      const double limit = vr_iwae_sample(lw, 1.0 - 1e-9);
      if (std::abs(limit - elbo_sample(lw)) > 1e-6) return std::string{"ELBO limit mismatch"};
    }
    return std::string{};
  });

  run.check("bounds", "decomposition_sample", "identity and remainder range", [&] {
    RngStream stream = stream_for(3);
    const std::size_t batches = scaled(1000, options.scale);
    for (std::size_t b = 0; b < batches; ++b) {
      const auto lw = random_batch(stream);
      const double alpha = 0.9 * stream.uniform();
      const auto dec = decomposition_sample(lw, alpha);
      if (std::abs(dec.delta_max + dec.r_term - vr_iwae_sample(lw, alpha)) > 1e-10) {
        return std::string{"delta_max + r != gap sample"};
      }
      if (dec.r_term < 0.0 || dec.r_term > dec.t_stat / (1.0 - alpha) + 1e-12) {
        return std::string{"r outside [0, T/(1-alpha)]"};
      }
    }
    return std::string{};
  });

  run.check("weights", "diagnostics", "ranges and shift invariance", [&] {
    RngStream stream = stream_for(4);
    for (int b = 0; b < 200; ++b) {
      auto lw = random_batch(stream);
      const double n = static_cast<double>(lw.size());
      const double t = t_statistic(lw, 0.3);
      const double e = ess(lw);
      const double share = max_weight_share(lw);
      if (t < 0.0 || t > n - 1.0 + 1e-9) return std::string{"T outside [0, N-1]"};
      if (e < 1.0 || e > n) return std::string{"ESS outside [1, N]"};
      if (share < 1.0 / n - 1e-12 || share > 1.0) return std::string{"max share outside [1/N, 1]"};
      auto shifted = lw;
      for (double& v : shifted) v += 123.0;
      if (std::abs(t_statistic(shifted, 0.3) - t) > 1e-9 * std::max(1.0, t)) {
        return std::string{"T not shift invariant"};
      }
    }
    return std::string{};
  });

  run.check("models", "lingauss_analytics", "closed forms match quadrature", [&] {
    RngStream stream = stream_for(5);
    for (std::size_t d = 1; d <= 3; ++d) {
      for (int rep = 0; rep < 3; ++rep) {
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
          const auto quad = oracle::lingauss_moment_forms(
              {lg.theta, lg.a_tilde, lg.b, lg.x}, alpha);
          if (std::abs(closed.vr_gap - quad.vr_gap) > 1e-6 * std::max(1e-3, std::abs(quad.vr_gap)) ||
              std::abs(closed.gamma2 - quad.gamma2) > 1e-6 * std::max(1e-3, std::abs(quad.gamma2))) {
            return "d=" + std::to_string(d) + " alpha=" + describe(alpha) + " mismatch";
          }
        }
      }
    }
    return std::string{};
  });

  run.check("models", "sample_relative_log_weights", "reduced and full laws agree", [&] {
    const auto setup = make_linear_gaussian_setup(20, 0.1, seed, 64);
    const std::size_t count = scaled(20000, options.scale);
    RngStream s1 = stream_for(6);
    RngStream s2 = stream_for(7);
    std::vector<double> reduced(count), full(count);
    setup.model.sample_relative_log_weights(s1, reduced);
    setup.model.sample_relative_log_weights_full(s2, full);
    const auto a = mean_std(reduced);
    const auto b = mean_std(full);
    const double se = std::sqrt((a.std * a.std + b.std * b.std) / static_cast<double>(count));
    if (std::abs(a.mean - b.mean) > 5.0 * se) return std::string{"means differ"};
    if (std::abs(a.std / b.std - 1.0) > 5.0 * std::sqrt(1.0 / static_cast<double>(count))) {
      return std::string{"spreads differ"};
    }
    return std::string{};
  });

  run.check("bounds", "gap_mc", "small-gap regime matches the 1/N expansion", [&] {
    const Model model = make_toy(1);
    for (double alpha : {0.0, 0.5}) {
      const auto an = toy_analytics(alpha, model.bd2());
      const auto est = gap_mc(model, alpha, 256, scaled(20000, options.scale), stream_for(8));
      const double predicted = an.vr_gap - an.gamma2 / 512.0;
      if (std::abs(est.mean - predicted) > std::max(5.0 * est.std_error, 0.002)) {
        return "alpha=" + describe(alpha) + " gap " + describe(est.mean) + " vs " +
               describe(predicted);
      }
    }
    return std::string{};
  });

  run.check("bounds", "gap_replicates", "serial and parallel paths agree", [&] {
    const Model model = make_toy(50);
    const auto serial = gap_replicates(model, 0.2, 16, 256, stream_for(9), Execution::kSerial);
    const auto parallel = gap_replicates(model, 0.2, 16, 256, stream_for(9), Execution::kParallel);
    return serial == parallel ? std::string{} : std::string{"results differ"};
  });

  run.check("gradients", "gradient_means", "drep matches rep in expectation", [&] {
    const std::size_t replicates = scaled(20000, options.scale);
    GaussianToy toy{std::vector<double>(3, 0.0), std::vector<double>(3, 0.5)};
    const Model model{toy};
    for (double alpha : {0.3, 0.7}) {
      const auto means = gradient_means(model, alpha, 8, replicates, stream_for(10),
                                        default_execution(), options.h_rule);
      for (std::size_t k = 0; k < means.rep.mean.size(); ++k) {
        const double diff = means.rep.mean[k] - means.drep.mean[k];
        const double se = std::hypot(means.rep.std_error[k], means.drep.std_error[k]);
        if (std::abs(diff) > 4.0 * se + 1e-12) {
          return "alpha=" + describe(alpha) + " coordinate " + std::to_string(k) + " differs by " +
                 describe(diff) + " (se " + describe(se) + ")";
        }
      }
    }
    return std::string{};
  });

  run.check("asymptotics", "expected_min_normal", "refined value near the exact minimum", [] {
    const double exact = oracle::expected_min_normal_exact(10000);
    const double refined = expected_min_normal(10000, true);
    return std::abs(exact - refined) < 0.05 ? std::string{}
                                            : "exact " + describe(exact) + " refined " + describe(refined);
  });

  run.check("asymptotics", "fit_constant", "recovers a planted constant", [] {
    std::vector<double> n{3, 8, 32, 128, 512};
    const AsymptoticCurve truth = AsymptoticCurve::lognormal(5.0, 0.2);
    std::vector<double> observed;
    for (double v : n) observed.push_back(truth.base(v) - 0.7 * truth.shape(v));
    AsymptoticCurve curve = AsymptoticCurve::lognormal(5.0, 0.2);
    const auto fit = curve.fit(n, observed);
    return std::abs(fit.c + 0.7) < 1e-10 && fit.rms_residual < 1e-10 ? std::string{}
                                                                    : std::string{"fit mismatch"};
  });

  run.check("experiments_cli", "table", "CSV round trip", [] {
    Table t{{"a", "b", "c"}};
    t.add_row({std::int64_t{3}, 0.1 + 0.2, std::string{"x"}});
    std::istringstream in{to_csv(t)};
    const Table back = read_csv(in);
    return back.size() == 1 && back.number(0, "b") == 0.1 + 0.2 && back.text(0, "c") == "x"
               ? std::string{}
               : std::string{"round trip changed values"};
  });

  return std::move(run.report);
}

}  // namespace vriwae
