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

// Serial against OpenMP for the replicate-parallel kernels. Both paths give
// bit-identical results, so only the timings differ.

#include <benchmark/benchmark.h>

#include <vector>

#include "vriwae/bounds.hpp"
#include "vriwae/gradients.hpp"
#include "vriwae/models.hpp"

namespace {

using vriwae::Execution;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_GapReplicatesToy(benchmark::State& state) {
  const vriwae::Model model = vriwae::make_toy(1000);
  const vriwae::RngStream stream{0, 1};
  for (auto _ : state) {
    auto gaps = vriwae::gap_replicates(model, 0.2, 128, 1000, stream, mode(state));
    benchmark::DoNotOptimize(gaps.data());
  }
  label(state);
}
BENCHMARK(BM_GapReplicatesToy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GapReplicatesFull(benchmark::State& state) {
  const auto setup = vriwae::make_linear_gaussian_setup(100, 0.01, 0, 64);
  const vriwae::RngStream stream{0, 2};
  for (auto _ : state) {
    auto gaps = vriwae::gap_replicates(setup.model, 0.5, 32, 200, stream, mode(state),
                                       vriwae::WeightSampling::kFull);
    benchmark::DoNotOptimize(gaps.data());
  }
  label(state);
}
BENCHMARK(BM_GapReplicatesFull)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GradientMeans(benchmark::State& state) {
  const auto setup = vriwae::make_linear_gaussian_setup(20, 0.01, 0, 64);
  const vriwae::RngStream stream{0, 3};
  for (auto _ : state) {
    auto means = vriwae::gradient_means(setup.model, 0.5, 64, 1000, stream, mode(state));
    benchmark::DoNotOptimize(means.rep.mean.data());
  }
  label(state);
}
BENCHMARK(BM_GradientMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FdOracle(benchmark::State& state) {
  const vriwae::Model model{
      vriwae::GaussianToy{std::vector<double>(5, 0.0), std::vector<double>(5, 0.5)}};
  const vriwae::RngStream stream{0, 4};
  for (auto _ : state) {
    auto fd = vriwae::fd_grad_oracle(model, 0.3, 8, vriwae::kDefaultFdStep, 2000, stream,
                                     mode(state));
    benchmark::DoNotOptimize(fd.mean.data());
  }
  label(state);
}
BENCHMARK(BM_FdOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
