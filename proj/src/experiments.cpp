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

#include "vriwae/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "vriwae/asymptotics.hpp"
#include "vriwae/bounds.hpp"
#include "vriwae/numeric.hpp"
#include "vriwae/parallel.hpp"
#include "vriwae/weights.hpp"

namespace vriwae {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

// Dense index of a grid cell; keeps stream ids distinct across cells.
std::uint64_t cell_id(std::initializer_list<std::pair<std::size_t, std::size_t>> digits) {
  std::uint64_t id = 0;
  for (const auto& [value, radix] : digits) id = id * radix + value;
  return id;
}

// The toy has no perturbation axis.
std::vector<double> perturbations(const ExperimentSpec& spec) {
  if (spec.model == ModelKind::kToy) return {0.0};
  return spec.sigma_perturb;
}

std::vector<double> as_doubles(std::span<const std::size_t> values) {
  return {values.begin(), values.end()};
}

double mean_abs(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += std::abs(v);
  return values.empty() ? kNaN : total / static_cast<double>(values.size());
}

struct CurveSummary {
  std::vector<double> predictions;
  double constant = kNaN;
  double rms = kNaN;
  double rel_rms = kNaN;
  std::size_t points = 0;
};

// Fits `curve` to the observed gaps; relative RMS is taken against the mean
// |gap| over the fitted points.
CurveSummary fit_curve(AsymptoticCurve curve, std::span<const double> n_values,
                       std::span<const double> observed) {
  CurveSummary out;
  out.predictions.assign(n_values.size(), kNaN);
  std::vector<double> used_n, used_obs;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] >= curve.min_n() && std::isfinite(curve.base(n_values[i])) &&
        std::isfinite(observed[i])) {
      used_n.push_back(n_values[i]);
      used_obs.push_back(observed[i]);
    }
  }
  if (used_n.empty()) return out;
  const ConstantFit fit = curve.fit(used_n, used_obs);
  out.constant = fit.c;
  out.rms = fit.rms_residual;
  const double scale = mean_abs(used_obs);
  out.rel_rms = scale > 0.0 ? fit.rms_residual / scale : (fit.rms_residual == 0.0 ? 0.0 : kNaN);
  out.points = used_n.size();
  for (std::size_t i = 0; i < n_values.size(); ++i) out.predictions[i] = curve.evaluate(n_values[i]);
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kGap: return "gap";
    case ExperimentKind::kSnr: return "snr";
    case ExperimentKind::kWeights: return "weights";
    case ExperimentKind::kCollapse: return "collapse";
    case ExperimentKind::kTrain: return "train";
    case ExperimentKind::kFit: return "fit";
    case ExperimentKind::kSelftest: return "selftest";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::kGap, ExperimentKind::kSnr, ExperimentKind::kWeights,
                    ExperimentKind::kCollapse, ExperimentKind::kTrain, ExperimentKind::kFit,
                    ExperimentKind::kSelftest}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string{name} + "'");
}

void ExperimentSpec::validate() const {
  if (alphas.empty()) throw std::invalid_argument("config: alpha list is empty");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("config: alpha values must lie in [0, 1]");
  }
  if (dims.empty()) throw std::invalid_argument("config: d list is empty");
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("config: d must be >= 1");
  }
  if (n_grid.empty()) throw std::invalid_argument("config: N grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw std::invalid_argument("config: N values must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw std::invalid_argument("config: N grid must be strictly increasing");
    }
  }
  if (replicates == 0) throw std::invalid_argument("config: replicates must be >= 1");
  if (weight_samples < 2) throw std::invalid_argument("config: weight_samples must be >= 2");
  for (double s : sigma_perturb) {
    if (!(s >= 0.0)) throw std::invalid_argument("config: sigma_perturb must be >= 0");
  }
  if (sigma_perturb.empty()) throw std::invalid_argument("config: sigma_perturb list is empty");
  if (estimators.empty()) throw std::invalid_argument("config: estimator list is empty");
  if (m == 0) throw std::invalid_argument("config: M must be >= 1");
  if (histogram_bins == 0) throw std::invalid_argument("config: histogram_bins must be >= 1");
  if (dataset_size == 0) throw std::invalid_argument("config: dataset_size must be >= 1");
  if (kind == ExperimentKind::kTrain) train.validate();
}

nlohmann::ordered_json to_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["model"] = to_string(spec.model);
  j["alpha"] = spec.alphas;
  j["d"] = spec.dims;
  j["n_grid"] = spec.n_grid;
  j["replicates"] = spec.replicates;
  j["weight_samples"] = spec.weight_samples;
  j["seed"] = spec.seed;
  j["sigma_perturb"] = spec.sigma_perturb;
  j["theta_scale"] = spec.theta_scale;
  std::vector<std::string> estimators;
  for (auto e : spec.estimators) estimators.emplace_back(to_string(e));
  j["estimator"] = estimators;
  j["M"] = spec.m;
  j["coordinate_sample"] = spec.coordinate_sample;
  j["histogram_bins"] = spec.histogram_bins;
  j["dataset_size"] = spec.dataset_size;
  nlohmann::ordered_json t;
  t["alpha"] = spec.train.alpha;
  t["N"] = spec.train.n_importance;
  t["estimator"] = to_string(spec.train.estimator);
  t["optimizer"] = to_string(spec.train.optimizer);
  t["learning_rate"] = spec.train.learning_rate;
  t["epochs"] = spec.train.epochs;
  t["train_theta"] = spec.train.train_theta;
  t["train_phi"] = spec.train.train_phi;
  t["log_every"] = spec.train.log_every;
  t["eval_replicates"] = spec.train.eval_replicates;
  j["train"] = t;
  j["out"] = spec.out;
  j["format"] = spec.format == OutputFormat::kCsv ? "csv" : "json";
  j["plot"] = spec.plot;
  j["input"] = spec.input;
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec spec) {
  if (!j.is_object()) throw std::invalid_argument("config: config must be a JSON object");
  // Scalars are accepted where lists are expected.
  const auto list = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    using T = typename std::decay_t<decltype(target)>::value_type;
    target = j.at(key).is_array() ? j.at(key).get<std::vector<T>>()
                                  : std::vector<T>{j.at(key).get<T>()};
  };
  const auto scalar = [&](const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  if (j.contains("kind")) spec.kind = parse_experiment_kind(j.at("kind").get<std::string>());
  if (j.contains("model")) spec.model = parse_model_kind(j.at("model").get<std::string>());
  list("alpha", spec.alphas);
  list("d", spec.dims);
  list("n_grid", spec.n_grid);
  scalar("replicates", spec.replicates);
  scalar("weight_samples", spec.weight_samples);
  scalar("seed", spec.seed);
  list("sigma_perturb", spec.sigma_perturb);
  scalar("theta_scale", spec.theta_scale);
  if (j.contains("estimator")) {
    std::vector<std::string> names;
    list("estimator", names);
    spec.estimators.clear();
    for (const auto& n : names) spec.estimators.push_back(parse_estimator_kind(n));
  }
  scalar("M", spec.m);
  scalar("coordinate_sample", spec.coordinate_sample);
  scalar("histogram_bins", spec.histogram_bins);
  scalar("dataset_size", spec.dataset_size);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    if (t.contains("alpha")) spec.train.alpha = t.at("alpha").get<double>();
    if (t.contains("N")) spec.train.n_importance = t.at("N").get<std::size_t>();
    if (t.contains("estimator")) {
      spec.train.estimator = parse_estimator_kind(t.at("estimator").get<std::string>());
    }
    if (t.contains("optimizer")) {
      spec.train.optimizer = parse_optimizer_kind(t.at("optimizer").get<std::string>());
    }
    if (t.contains("learning_rate")) spec.train.learning_rate = t.at("learning_rate").get<double>();
    if (t.contains("epochs")) spec.train.epochs = t.at("epochs").get<std::size_t>();
    if (t.contains("train_theta")) spec.train.train_theta = t.at("train_theta").get<bool>();
    if (t.contains("train_phi")) spec.train.train_phi = t.at("train_phi").get<bool>();
    if (t.contains("log_every")) spec.train.log_every = t.at("log_every").get<std::size_t>();
    if (t.contains("eval_replicates")) {
      spec.train.eval_replicates = t.at("eval_replicates").get<std::size_t>();
    }
  }
  scalar("out", spec.out);
  if (j.contains("format")) spec.format = parse_output_format(j.at("format").get<std::string>());
  scalar("plot", spec.plot);
  scalar("input", spec.input);
  return spec;
}

void stamp_metadata(Table& table, const ExperimentSpec& spec) {
  table.metadata.emplace_back("schema_version", std::to_string(kSchemaVersion));
  table.metadata.emplace_back("kind", std::string{to_string(spec.kind)});
  table.metadata.emplace_back("seed", std::to_string(spec.seed));
  // Output destinations do not affect the numbers, so they stay out of the echo.
  auto echo = to_json(spec);
  for (const char* key : {"out", "plot", "input"}) echo.erase(key);
  table.metadata.emplace_back("spec", echo.dump());
}

Model experiment_model(const ExperimentSpec& spec, std::size_t d, double sigma_perturb) {
  if (spec.model == ModelKind::kToy) return make_toy(d, spec.theta_scale);
  return make_linear_gaussian_setup(d, sigma_perturb, spec.seed, spec.dataset_size).model;
}

Table run_gap_experiment(const ExperimentSpec& spec) {
  spec.validate();
  Table table{{"model", "sigma_perturb", "alpha", "d", "N", "replicates", "mean_gap", "se_gap",
               "mean_bound", "log_marginal", "error_term", "gamma2", "bd", "a_const", "sigma2",
               "pred_thm3", "pred_thm3_fit", "c1", "rms_thm3", "asym_family", "pred_asym", "c2", "rms_asym",
               "rel_rms_asym"}};
  stamp_metadata(table, spec);
  const auto sigmas = perturbations(spec);
  const auto n_values = as_doubles(spec.n_grid);

  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    for (std::size_t di = 0; di < spec.dims.size(); ++di) {
      const std::size_t d = spec.dims[di];
      const Model model = experiment_model(spec, d, sigmas[si]);
      const bool toy = model.kind() == ModelKind::kToy;
      for (std::size_t ai = 0; ai < spec.alphas.size(); ++ai) {
        const double alpha = spec.alphas[ai];
        std::vector<BoundEstimate> gaps;
        for (std::size_t ki = 0; ki < spec.n_grid.size(); ++ki) {
          const RngStream stream{spec.seed,
                                 derive_stream_id(StreamPurpose::kGap,
                                                  cell_id({{si, sigmas.size()},
                                                           {di, spec.dims.size()},
                                                           {ai, spec.alphas.size()},
                                                           {ki, spec.n_grid.size()}}))};
          gaps.push_back(gap_mc(model, alpha, spec.n_grid[ki], spec.replicates, stream));
        }
        std::vector<double> observed;
        for (const auto& g : gaps) observed.push_back(g.mean);

        // Closed forms need alpha < 1; the ELBO path has no 1/N expansion.
        double error_term = kNaN, gamma2 = kNaN, bd = kNaN, a_const = kNaN, sigma2 = kNaN;
        if (toy) bd = std::sqrt(model.bd2());
        if (!toy) {
          a_const = model.a_const();
          sigma2 = model.sigma2();
        }
        CurveSummary thm3, asym;
        std::vector<double> thm3_analytic(n_values.size(), kNaN);
        if (alpha < 1.0) {
          if (toy) {
            const auto an = toy_analytics(alpha, model.bd2());
            error_term = an.vr_gap;
            gamma2 = an.gamma2;
          } else {
            const auto an = lingauss_analytics(model, alpha);
            error_term = an.vr_gap;
            gamma2 = an.gamma2;
          }
          if (std::isfinite(gamma2)) {
            const auto curve = AsymptoticCurve::thm3(error_term, gamma2);
            for (std::size_t ki = 0; ki < n_values.size(); ++ki) {
              thm3_analytic[ki] = curve.base(n_values[ki]);
            }
            thm3 = fit_curve(curve, n_values, observed);
          } else {
            thm3.predictions.assign(n_values.size(), kNaN);
          }
          asym = fit_curve(toy ? AsymptoticCurve::lognormal(bd, alpha)
                               : AsymptoticCurve::thm6(static_cast<double>(d), a_const,
                                                       std::sqrt(sigma2)),
                           n_values, observed);
        } else {
          thm3.predictions.assign(n_values.size(), kNaN);
          asym.predictions.assign(n_values.size(), kNaN);
        }
        const std::string family{
            to_string(toy ? CurveFamily::kLognormal : CurveFamily::kThm6)};
        for (std::size_t ki = 0; ki < spec.n_grid.size(); ++ki) {
          const auto& g = gaps[ki];
          table.add_row({std::string{to_string(model.kind())}, sigmas[si], alpha, as_int(d),
                         as_int(spec.n_grid[ki]), as_int(g.replicates), g.mean, g.std_error,
                         g.mean + model.log_marginal(), model.log_marginal(), error_term, gamma2,
                         bd, a_const, sigma2, thm3_analytic[ki], thm3.predictions[ki], thm3.constant, thm3.rms,
                         family, asym.predictions[ki], asym.constant, asym.rms, asym.rel_rms});
        }
      }
    }
  }
  return table;
}

Table run_snr_experiment(const ExperimentSpec& spec) {
  spec.validate();
  Table table{{"model", "sigma_perturb", "estimator", "alpha", "d", "M", "N", "block", "snr_mean",
               "slope", "slope_lo", "slope_hi", "ref_slope"}};
  stamp_metadata(table, spec);
  const auto sigmas = perturbations(spec);
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    for (std::size_t di = 0; di < spec.dims.size(); ++di) {
      const std::size_t d = spec.dims[di];
      const Model model = experiment_model(spec, d, sigmas[si]);
      for (std::size_t ai = 0; ai < spec.alphas.size(); ++ai) {
        const double alpha = spec.alphas[ai];
        const RngStream stream{
            spec.seed, derive_stream_id(StreamPurpose::kSnr,
                                        cell_id({{si, sigmas.size()},
                                                 {di, spec.dims.size()},
                                                 {ai, spec.alphas.size()}}))};
        const SnrSweep sweep = snr_sweep(model, alpha, spec.m, spec.n_grid, spec.replicates,
                                         spec.coordinate_sample, stream);
        for (EstimatorKind estimator : spec.estimators) {
          const SnrReport& report = estimator == EstimatorKind::kRep ? sweep.rep : sweep.drep;
          // Reference rates: theta SNR grows like sqrt(N); the rep phi SNR
          // decays like 1/sqrt(N) at alpha = 0 and grows like sqrt(N) otherwise.
          // No reference is recorded for the drep phi block.
          const double phi_ref = estimator == EstimatorKind::kDrep ? kNaN
                                 : alpha == 0.0                     ? -0.5
                                                                    : 0.5;
          const std::pair<const char*, const SnrBlock*> blocks[] = {{"theta", &report.theta},
                                                                    {"phi", &report.phi}};
          for (const auto& [name, block] : blocks) {
            const double ref = std::string_view{name} == "theta" ? 0.5 : phi_ref;
            for (std::size_t ki = 0; ki < report.n_grid.size(); ++ki) {
              table.add_row({std::string{to_string(model.kind())}, sigmas[si],
                             std::string{to_string(estimator)}, alpha, as_int(d), as_int(spec.m),
                             as_int(report.n_grid[ki]), std::string{name}, block->snr_mean[ki],
                             block->fit.slope, block->fit.slope_lo, block->fit.slope_hi, ref});
            }
          }
        }
      }
    }
  }
  return table;
}

WeightsResult run_weights_experiment(const ExperimentSpec& spec) {
  spec.validate();
  WeightsResult result{Table{{"model", "sigma_perturb", "d", "samples", "log_mean", "log_std",
                              "qq_corr", "log_min", "log_max"}},
                       Table{{"model", "sigma_perturb", "d", "bin", "lo", "hi", "count"}}};
  stamp_metadata(result.summary, spec);
  stamp_metadata(result.histogram, spec);
  constexpr std::size_t kChunk = 1000;
  const auto sigmas = perturbations(spec);
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    for (std::size_t di = 0; di < spec.dims.size(); ++di) {
      const std::size_t d = spec.dims[di];
      const Model model = experiment_model(spec, d, sigmas[si]);
      const RngStream stream{
          spec.seed, derive_stream_id(StreamPurpose::kWeights,
                                      cell_id({{si, sigmas.size()}, {di, spec.dims.size()}}))};
      const std::size_t total = spec.weight_samples;
      const std::size_t chunks = (total + kChunk - 1) / kChunk;
      const auto parts = map_replicates(chunks, default_execution(), [&](std::size_t c) {
        RngStream local = stream.substream(static_cast<std::uint32_t>(c));
        std::vector<double> out(std::min(kChunk, total - c * kChunk));
        model.sample_relative_log_weights_full(local, out);
        return out;
      });
      std::vector<double> lw;
      lw.reserve(total);
      for (const auto& p : parts) lw.insert(lw.end(), p.begin(), p.end());

      const auto moments = log_weight_moments(lw);
      const auto [lo_it, hi_it] = std::minmax_element(lw.begin(), lw.end());
      const double lo = *lo_it;
      const double hi = *hi_it;
      const QQResult qq = qq_points(lw);
      const std::string model_name{to_string(model.kind())};
      result.summary.add_row({model_name, sigmas[si], as_int(d), as_int(total), moments.mean,
                              moments.std, qq.correlation, lo, hi});

      const std::size_t bins = spec.histogram_bins;
      const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
      std::vector<std::int64_t> counts(bins, 0);
      for (double v : lw) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++counts[std::min(b, bins - 1)];
      }
      for (std::size_t b = 0; b < bins; ++b) {
        result.histogram.add_row({model_name, sigmas[si], as_int(d), as_int(b),
                                  lo + width * static_cast<double>(b),
                                  lo + width * static_cast<double>(b + 1), counts[b]});
      }
    }
  }
  return result;
}

Table run_collapse_experiment(const ExperimentSpec& spec) {
  spec.validate();
  Table table{{"model", "sigma_perturb", "alpha", "d", "N", "replicates", "t_mean", "t_se",
               "max_share_mean", "max_share_se", "ess_mean", "ess_se"}};
  stamp_metadata(table, spec);
  const auto sigmas = perturbations(spec);
  const auto summary = [](const std::vector<double>& v) {
    const MeanStd ms = mean_std(v);
    return std::pair{ms.mean, ms.std / std::sqrt(static_cast<double>(v.size()))};
  };
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    for (std::size_t di = 0; di < spec.dims.size(); ++di) {
      const std::size_t d = spec.dims[di];
      const Model model = experiment_model(spec, d, sigmas[si]);
      for (std::size_t ai = 0; ai < spec.alphas.size(); ++ai) {
        const double alpha = spec.alphas[ai];
        for (std::size_t ki = 0; ki < spec.n_grid.size(); ++ki) {
          const std::size_t n = spec.n_grid[ki];
          const RngStream stream{spec.seed,
                                 derive_stream_id(StreamPurpose::kCollapse,
                                                  cell_id({{si, sigmas.size()},
                                                           {di, spec.dims.size()},
                                                           {ai, spec.alphas.size()},
                                                           {ki, spec.n_grid.size()}}))};
          const auto diag = map_replicates(spec.replicates, default_execution(), [&](std::size_t r) {
            RngStream local = stream.substream(static_cast<std::uint32_t>(r));
            std::vector<double> lw(n);
            model.sample_relative_log_weights(local, lw);
            const double t = alpha < 1.0 ? t_statistic(lw, alpha) : kNaN;
            return std::tuple{t, max_weight_share(lw), ess(lw)};
          });
          std::vector<double> t, share, e;
          for (const auto& [tv, sv, ev] : diag) {
            t.push_back(tv);
            share.push_back(sv);
            e.push_back(ev);
          }
          const auto [t_mean, t_se] = summary(t);
          const auto [s_mean, s_se] = summary(share);
          const auto [e_mean, e_se] = summary(e);
          table.add_row({std::string{to_string(model.kind())}, sigmas[si], alpha, as_int(d),
                         as_int(n), as_int(spec.replicates), t_mean, t_se, s_mean, s_se, e_mean,
                         e_se});
        }
      }
    }
  }
  return table;
}

Table run_train_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dims.front();
  const double sigma = perturbations(spec).front();
  const std::string metric = spec.model == ModelKind::kToy ? "bd2_over_d" : "lambda";
  Table table{{"epoch", metric, "gap_mean", "gap_se", "grad_norm"}};
  stamp_metadata(table, spec);

  const RngStream stream{spec.seed, derive_stream_id(StreamPurpose::kTrain, d)};
  Trajectory trajectory = [&] {
    if (spec.model == ModelKind::kToy) return run_training(make_toy(d, spec.theta_scale), spec.train, stream);
    const auto setup = make_linear_gaussian_setup(d, sigma, spec.seed, spec.dataset_size);
    return run_training(setup.model, spec.train, stream);
  }();
  for (const auto& row : trajectory.rows) {
    table.add_row({as_int(row.epoch), row.metric, row.gap_mean, row.gap_se, row.grad_norm});
  }
  return table;
}

Table fit_gap_table(const Table& gap) {
  for (const char* col : {"model", "sigma_perturb", "alpha", "d", "N", "mean_gap", "error_term",
                          "gamma2", "bd", "a_const", "sigma2"}) {
    (void)gap.column(col);
  }
  Table out{{"model", "sigma_perturb", "alpha", "d", "family", "constant", "rms", "rel_rms",
             "points"}};
  out.metadata.emplace_back("schema_version", std::to_string(kSchemaVersion));
  out.metadata.emplace_back("kind", "fit");

  using Key = std::tuple<std::string, double, double, double>;
  std::vector<Key> order;
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < gap.size(); ++r) {
    Key key{gap.text(r, "model"), gap.number(r, "sigma_perturb"), gap.number(r, "alpha"),
            gap.number(r, "d")};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r);
  }
  for (const Key& key : order) {
    const auto& rows = groups.at(key);
    const auto& [model_name, sigma, alpha, d] = key;
    if (!(alpha < 1.0)) continue;
    std::vector<double> n_values, observed;
    for (std::size_t r : rows) {
      n_values.push_back(gap.number(r, "N"));
      observed.push_back(gap.number(r, "mean_gap"));
    }
    const std::size_t first = rows.front();
    const bool toy = parse_model_kind(model_name) == ModelKind::kToy;
    std::vector<std::pair<CurveFamily, CurveSummary>> fits;
    const double gamma2 = gap.number(first, "gamma2");
    if (std::isfinite(gamma2)) {
      fits.emplace_back(CurveFamily::kThm3,
                        fit_curve(AsymptoticCurve::thm3(gap.number(first, "error_term"), gamma2),
                                  n_values, observed));
    }
    fits.emplace_back(
        toy ? CurveFamily::kLognormal : CurveFamily::kThm6,
        fit_curve(toy ? AsymptoticCurve::lognormal(gap.number(first, "bd"), alpha)
                      : AsymptoticCurve::thm6(d, gap.number(first, "a_const"),
                                              std::sqrt(gap.number(first, "sigma2"))),
                  n_values, observed));
    for (const auto& [family, s] : fits) {
      out.add_row({model_name, sigma, alpha, static_cast<std::int64_t>(d),
                   std::string{to_string(family)}, s.constant, s.rms, s.rel_rms,
                   as_int(s.points)});
    }
  }
  return out;
}

}  // namespace vriwae
