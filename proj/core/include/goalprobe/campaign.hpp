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

#ifndef GOALPROBE_CAMPAIGN_HPP_
#define GOALPROBE_CAMPAIGN_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "goalprobe/metrics.hpp"
#include "goalprobe/optimizer.hpp"
#include "goalprobe/planner.hpp"
#include "goalprobe/scenario.hpp"
#include "goalprobe/sim.hpp"

namespace goalprobe {

/// Maps an episode to the quantity being maximized.
using Scorer = std::function<double(const Episode&)>;
using PlannerFactory = std::function<std::unique_ptr<Planner>()>;

struct EpisodeRecord {
  int iter = 0;
  Prompt u;
  std::vector<Point2> goals;
  Episode episode;
  double objective = 0.0;               // scorer output; -inf when failed
  std::optional<EpisodeScore> metrics;  // unset when failed
  std::string error;
  std::string episode_file;

  bool failed() const { return !metrics.has_value(); }
};

struct CampaignResult {
  std::string scenario_id;
  SamplerConfig sampler;
  std::vector<EpisodeRecord> records;

  std::vector<Observation> observations() const;
  std::vector<Episode> episodes() const;
};

/// prompt -> goals -> closed-loop episode -> score, with every failure
/// captured in the record rather than thrown.
EpisodeRecord evaluate_prompt(const Scenario& scenario, const Prompt& u, int iter, const PolicyProvider& engine,
                              Planner& planner, const Scorer& scorer);

/// Runs `cfg.budget` episodes. BO is sequential; the Sobol baseline spreads
/// its episodes over `jobs` worker threads (record order is unaffected).
CampaignResult run_campaign(const Scenario& scenario, const SamplerConfig& cfg, const PolicyProvider& engine,
                            const PlannerFactory& planner_factory, const Scorer& scorer = criticality_score,
                            int jobs = 1);

}  // namespace goalprobe

#endif  // GOALPROBE_CAMPAIGN_HPP_
