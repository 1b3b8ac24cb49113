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

#ifndef GOALPROBE_METRICS_HPP_
#define GOALPROBE_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "goalprobe/geom.hpp"
#include "goalprobe/sim.hpp"

namespace goalprobe {

/// Identifier written to run manifests so exported TTC values stay
/// interpretable.
inline constexpr const char* kTtcDefinition = "footprint-gap-forward-difference-v1";

struct EpisodeScore {
  double g = 0.0;         // criticality, -min_dist
  double min_dist = 0.0;  // meters, center to center
  double ttc_min = 0.0;   // seconds, +inf when never closing
  bool collided = false;
};

struct CriticalPoint {
  int timestep = 0;
  std::size_t agent = 0;  // index of the non-ego agent
  double distance = 0.0;
};

/// argmin over t >= 1 and non-ego agents of the ego-agent center distance.
/// Earliest timestep, then lowest agent index, wins ties. Throws
/// std::invalid_argument for traces shorter than 2.
CriticalPoint closest_approach(const Episode& episode);

/// g = -min_{t>=1} min_n |x_t^ego - x_t^n|.
double criticality_score(const Episode& episode);

/// Minimum over steps and non-ego agents of footprint gap / closing speed.
double ttc_min(const Episode& episode);

EpisodeScore score_episode(const Episode& episode);

/// Mean position distance over the common prefix of two trajectories.
double trajectory_distance(std::span<const Point2> a, std::span<const Point2> b);

enum class AsdConvention {
  kPaper,         // 1/(n(n-1)) * sum_{i<j} d_ij
  kMeanPairwise,  // 2/(n(n-1)) * sum_{i<j} d_ij
};

AsdConvention asd_convention_from(const std::string& name);
const char* asd_convention_name(AsdConvention convention);

/// Average self-distance of a trajectory set; n >= 2.
double asd(std::span<const std::vector<Point2>> trajectories, AsdConvention convention = AsdConvention::kPaper);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

struct CampaignStats {
  std::size_t n = 0;  // successful episodes
  double coll_pct = 0.0;
  MeanStd min_dist;
  MeanStd ttc;  // over finite TTC values only
  std::size_t ttc_count = 0;
  std::size_t ttc_inf_count = 0;
  double ego_asd = 0.0;
  double agent_asd = 0.0;
};

/// Statistics over successful episodes. Agent diversity averages the
/// per-agent trajectory distance when there are several simulated agents.
/// Throws std::invalid_argument with fewer than 2 successful episodes.
CampaignStats campaign_stats(std::span<const Episode> episodes, AsdConvention convention = AsdConvention::kPaper);

}  // namespace goalprobe

#endif  // GOALPROBE_METRICS_HPP_
