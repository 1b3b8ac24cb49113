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

#include "goalprobe/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace goalprobe {

CriticalPoint closest_approach(const Episode& ep) {
  if (ep.trace.size() < 2) throw std::invalid_argument("criticality needs at least one step after the initial state");
  CriticalPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < ep.trace.size(); ++t) {
    const auto& states = ep.trace[t].states;
    const Point2 ego = states.at(ep.ego_index).position;
    for (std::size_t n = 0; n < states.size(); ++n) {
      if (n == ep.ego_index) continue;
      const double d = euclidean_distance(ego, states[n].position);
      if (d < best.distance) best = {static_cast<int>(t), n, d};
    }
  }
  if (!std::isfinite(best.distance)) throw std::invalid_argument("episode has no non-ego agent");
  return best;
}

double criticality_score(const Episode& ep) { return -closest_approach(ep).distance; }

double ttc_min(const Episode& ep) {
  if (ep.trace.size() < 2) throw std::invalid_argument("TTC needs at least two trace entries");
  double best = std::numeric_limits<double>::infinity();
  const std::size_t ego = ep.ego_index;
  const auto gap = [&](std::size_t t, std::size_t n) {
    const auto& s = ep.trace[t].states;
    return euclidean_distance(s[ego].position, s[n].position) - 0.5 * (ep.lengths[ego] + ep.lengths[n]);
  };
  for (std::size_t n = 0; n < ep.agent_ids.size(); ++n) {
    if (n == ego) continue;
    for (std::size_t t = 0; t < ep.trace.size(); ++t) {
      const double g = gap(t, n);
      if (g <= 0.0) return 0.0;
      if (t + 1 == ep.trace.size()) continue;
      const double closing = -(gap(t + 1, n) - g) / ep.dt;
      if (closing > 0.0) best = std::min(best, g / closing);
    }
  }
  return best;
}

EpisodeScore score_episode(const Episode& ep) {
  EpisodeScore s;
  s.min_dist = closest_approach(ep).distance;
  s.g = -s.min_dist;
  s.ttc_min = ttc_min(ep);
  s.collided = ep.collision.has_value();
  return s;
}

double trajectory_distance(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("trajectory_distance needs nonempty trajectories");
  const std::size_t n = std::min(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += euclidean_distance(a[k], b[k]);
  return sum / static_cast<double>(n);
}

AsdConvention asd_convention_from(const std::string& name) {
  if (name == "paper") return AsdConvention::kPaper;
  if (name == "mean_pairwise") return AsdConvention::kMeanPairwise;
  throw std::invalid_argument("unknown ASD convention '" + name + "' (use paper or mean_pairwise)");
}

const char* asd_convention_name(AsdConvention c) { return c == AsdConvention::kPaper ? "paper" : "mean_pairwise"; }

double asd(std::span<const std::vector<Point2>> trajectories, AsdConvention convention) {
  const std::size_t n = trajectories.size();
  if (n < 2) throw std::invalid_argument("ASD needs at least 2 trajectories");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += trajectory_distance(trajectories[i], trajectories[j]);
  }
  const double norm = static_cast<double>(n) * static_cast<double>(n - 1);
  return (convention == AsdConvention::kPaper ? 1.0 : 2.0) * sum / norm;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

CampaignStats campaign_stats(std::span<const Episode> episodes, AsdConvention convention) {
  std::vector<const Episode*> ok;
  for (const auto& ep : episodes) {
    if (!ep.failed && ep.trace.size() >= 2) ok.push_back(&ep);
  }
  if (ok.size() < 2) throw std::invalid_argument("campaign statistics need at least 2 successful episodes");

  CampaignStats st;
  st.n = ok.size();
  std::vector<double> dists;
  std::vector<double> ttcs;
  std::size_t collided = 0;
  for (const Episode* ep : ok) {
    const auto s = score_episode(*ep);
    dists.push_back(s.min_dist);
    if (std::isfinite(s.ttc_min)) {
      ttcs.push_back(s.ttc_min);
    } else {
      ++st.ttc_inf_count;
    }
    if (s.collided) ++collided;
  }
  st.coll_pct = 100.0 * static_cast<double>(collided) / static_cast<double>(st.n);
  st.min_dist = mean_std(dists);
  st.ttc = mean_std(ttcs);
  st.ttc_count = ttcs.size();

  std::vector<std::vector<Point2>> ego;
  for (const Episode* ep : ok) ego.push_back(ep->positions(ep->ego_index));
  st.ego_asd = asd(ego, convention);

  // Simulated agents are matched by position in the agent list.
  const Episode& first = *ok.front();
  double agent_sum = 0.0;
  std::size_t agent_count = 0;
  for (std::size_t a = 0; a < first.agent_ids.size(); ++a) {
    if (a == first.ego_index) continue;
    std::vector<std::vector<Point2>> trajs;
    for (const Episode* ep : ok) trajs.push_back(ep->positions(a));
    agent_sum += asd(trajs, convention);
    ++agent_count;
  }
  st.agent_asd = agent_count ? agent_sum / static_cast<double>(agent_count) : 0.0;
  return st;
}

}  // namespace goalprobe
