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

#include "goalprobe/campaign.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "goalprobe/sobol.hpp"

namespace goalprobe {

std::vector<Observation> CampaignResult::observations() const {
  std::vector<Observation> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.u, r.objective, static_cast<std::size_t>(r.iter)});
  return out;
}

std::vector<Episode> CampaignResult::episodes() const {
  std::vector<Episode> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.episode);
  return out;
}

EpisodeRecord evaluate_prompt(const Scenario& sc, const Prompt& u, int iter, const PolicyProvider& engine,
                              Planner& planner, const Scorer& scorer) {
  EpisodeRecord rec;
  rec.iter = iter;
  rec.u = u;
  rec.objective = -std::numeric_limits<double>::infinity();
  try {
    rec.goals = prompts_to_goals(sc, u);
    const auto policies = make_policies(sc, rec.goals, engine);
    rec.episode = simulate_episode(sc, rec.goals, planner, policies);
    if (rec.episode.failed) {
      rec.error = rec.episode.failure;
      return rec;
    }
    const double value = scorer(rec.episode);
    if (!std::isfinite(value)) {
      rec.error = "non-finite score";
      return rec;
    }
    rec.metrics = score_episode(rec.episode);
    rec.objective = value;
  } catch (const std::exception& e) {
    rec.metrics.reset();
    rec.error = e.what();
  }
  return rec;
}

CampaignResult run_campaign(const Scenario& sc, const SamplerConfig& cfg_in, const PolicyProvider& engine,
                            const PlannerFactory& planner_factory, const Scorer& scorer, int jobs) {
  SamplerConfig cfg = cfg_in;
  cfg.dim = static_cast<unsigned>(sc.prompt_dim());
  validate(cfg);

  CampaignResult result;
  result.scenario_id = sc.id;
  result.sampler = cfg;
  const auto budget = static_cast<std::size_t>(cfg.budget);
  result.records.resize(budget);

  if (cfg.kind == SamplerKind::kSobol) {
    // The baseline never looks at scores, so every prompt is known upfront.
    const SobolSequence seq(cfg.dim);
    const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(budget)));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
      const auto planner = planner_factory();
      for (std::size_t i = next++; i < budget; i = next++) {
        result.records[i] = evaluate_prompt(sc, seq.point(i + 1), static_cast<int>(i), engine, *planner, scorer);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return result;
  }

  const auto planner = planner_factory();
  std::vector<Observation> history;
  history.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    const Prompt u = suggest_next(history, cfg);
    result.records[i] = evaluate_prompt(sc, u, static_cast<int>(i), engine, *planner, scorer);
    history.push_back({u, result.records[i].objective, i});
  }
  return result;
}

}  // namespace goalprobe
