// Copyright 2026 The goalprobe Authors
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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "goalprobe/campaign.hpp"
#include "goalprobe/optimizer.hpp"
#include "goalprobe/surrogate.hpp"

namespace goalprobe {
namespace {

Scenario front_preset() { return load_scenario_file(std::string(GOALPROBE_PRESET_DIR) + "/front.scn"); }

std::vector<Observation> synthetic_history(int n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Observation> h;
  for (int i = 0; i < n; ++i) {
    Prompt p{u(rng), u(rng)};
    h.push_back({p, std::sin(6 * p[0]) - std::hypot(p[0] - 0.3, p[1] - 0.7), static_cast<std::size_t>(i)});
  }
  return h;
}

void BM_GpFit(benchmark::State& state) {
  const auto h = synthetic_history(static_cast<int>(state.range(0)));
  Eigen::MatrixXd x(h.size(), 2);
  Eigen::VectorXd y(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    x(i, 0) = h[i].prompt[0];
    x(i, 1) = h[i].prompt[1];
    y(i) = h[i].score;
  }
  for (auto _ : state) benchmark::DoNotOptimize(GpModel::fit(x, y));
}
BENCHMARK(BM_GpFit)->Arg(10)->Arg(40)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_SuggestNext(benchmark::State& state) {
  const auto h = synthetic_history(static_cast<int>(state.range(0)));
  SamplerConfig cfg;
  cfg.budget = 1000;  // history length alone must not exhaust the budget
  for (auto _ : state) benchmark::DoNotOptimize(suggest_next(h, cfg));
}
BENCHMARK(BM_SuggestNext)->Arg(10)->Arg(40)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_SimulateEpisode(benchmark::State& state) {
  const Scenario sc = front_preset();
  const ReactivePolicyProvider engine;
  ReferencePlanner planner;
  const Prompt u{0.4, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_prompt(sc, u, 0, engine, planner, criticality_score));
}
BENCHMARK(BM_SimulateEpisode)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace goalprobe

// The packaged benchmark_main archive is LTO bytecode from another gcc; define main here.
BENCHMARK_MAIN();
