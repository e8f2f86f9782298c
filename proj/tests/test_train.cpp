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

#include "vriwae/models.hpp"
#include "vriwae/train.hpp"

namespace vriwae {
namespace {

TEST(SgdStep, AscendsAlongGradient) {
  const std::vector<double> p{1.0, -2.0};
  const std::vector<double> g{0.5, 4.0};
  EXPECT_EQ(sgd_step(p, g, 0.1), (std::vector<double>{1.05, -1.6}));
  EXPECT_THROW(sgd_step(p, std::vector<double>{1.0}, 0.1), std::invalid_argument);
}

TEST(AdamStep, FirstStepMovesByLearningRate) {
  AdamState state{2};
  const std::vector<double> p{0.0, 0.0};
  const std::vector<double> g{3.0, -0.01};
  const auto out = adam_step(state, p, g, 0.1);
  // Bias correction makes the first step lr * sign(g) up to eps_hat.
  EXPECT_NEAR(out[0], 0.1, 1e-8);
  EXPECT_NEAR(out[1], -0.1, 1e-5);
  EXPECT_EQ(state.step, 1u);
}

TEST(AdamStep, HandValuesSecondStep) {
  AdamState state{1};
  std::vector<double> p{0.0};
  p = adam_step(state, p, std::vector<double>{1.0}, 0.01);
  p = adam_step(state, p, std::vector<double>{2.0}, 0.01);
  const double m = (0.9 * 0.1 + 0.1 * 2.0) / (1.0 - 0.81);
  const double v = (0.999 * 0.001 + 0.001 * 4.0) / (1.0 - 0.998001);
  const double first = 0.01 / (1.0 + 1e-8);
  EXPECT_NEAR(p[0], first + 0.01 * m / (std::sqrt(v) + 1e-8), 1e-15);
  AdamState wrong{3};
  EXPECT_THROW(adam_step(wrong, p, std::vector<double>{1.0}, 0.1), std::invalid_argument);
}

TEST(TrainConfig, Validation) {
  TrainConfig ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = ok;
  bad.alpha = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.n_importance = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.log_every = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.train_phi = false;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_EQ(parse_optimizer_kind("adam"), OptimizerKind::kAdam);
  EXPECT_THROW(parse_optimizer_kind("rmsprop"), std::invalid_argument);
}

TrainConfig small_config() {
  TrainConfig c;
  c.n_importance = 10;
  c.epochs = 200;
  c.log_every = 50;
  c.eval_replicates = 20;
  return c;
}

TEST(RunTraining, ToyPhiMovesTowardTheta) {
  const Model model = make_toy(20);
  auto config = small_config();
  config.learning_rate = 0.05;
  const auto t = run_training(model, config, RngStream{1, 1});
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.rows.front().epoch, 0u);
  EXPECT_DOUBLE_EQ(t.rows.front().metric, 1.0);
  EXPECT_EQ(t.rows.front().grad_norm, 0.0);
  EXPECT_EQ(t.rows.back().epoch, 200u);
  EXPECT_LT(t.rows.back().metric, 0.1);
  // theta is masked out.
  EXPECT_EQ(t.final_model.toy().theta, model.toy().theta);
}

TEST(RunTraining, LogsLastEpochOffSchedule) {
  auto config = small_config();
  config.epochs = 7;
  config.log_every = 5;
  const auto t = run_training(make_toy(3), config, RngStream{2, 2});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[1].epoch, 5u);
  EXPECT_EQ(t.rows[2].epoch, 7u);
}

TEST(RunTraining, ZeroEpochsLogsInitialState) {
  auto config = small_config();
  config.epochs = 0;
  const auto t = run_training(make_toy(3), config, RngStream{2, 2});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].epoch, 0u);
}

TEST(RunTraining, DeterministicForSeed) {
  auto config = small_config();
  config.estimator = EstimatorKind::kDrep;
  config.optimizer = OptimizerKind::kAdam;
  config.learning_rate = 0.01;
  const auto a = run_training(make_toy(10), config, RngStream{3, 3});
  const auto b = run_training(make_toy(10), config, RngStream{3, 3});
  const auto c = run_training(make_toy(10), config, RngStream{4, 3});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].metric, b.rows[i].metric);
    EXPECT_EQ(a.rows[i].gap_mean, b.rows[i].gap_mean);
  }
  EXPECT_NE(a.rows.back().metric, c.rows.back().metric);
}

TEST(RunTraining, ThetaOnlyKeepsPhi) {
  const Model model = make_toy(5);
  auto config = small_config();
  config.train_theta = true;
  config.train_phi = false;
  config.learning_rate = 0.05;
  const auto t = run_training(model, config, RngStream{5, 5});
  EXPECT_EQ(t.final_model.toy().phi, model.toy().phi);
  EXPECT_LT(t.rows.back().metric, 0.2);
}

TEST(RunTraining, DivergenceIsReported) {
  auto config = small_config();
  config.learning_rate = 1e6;
  EXPECT_THROW(run_training(make_toy(50), config, RngStream{6, 6}), TrainingDiverged);
}

TEST(RunTraining, LinearGaussianWithDataset) {
  const auto setup = make_linear_gaussian_setup(3, 0.5, 7, 16);
  auto config = small_config();
  config.epochs = 100;
  config.learning_rate = 0.05;
  config.optimizer = OptimizerKind::kAdam;
  const auto t = run_training(setup.model, config, RngStream{7, 7}, &setup.dataset);
  EXPECT_LT(t.rows.back().metric, t.rows.front().metric);
  EXPECT_THROW(run_training(make_toy(3), config, RngStream{0, 0}, &setup.dataset),
               std::invalid_argument);
}

}  // namespace
}  // namespace vriwae
