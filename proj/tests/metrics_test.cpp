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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"

namespace goalprobe {
namespace {

using testing::make_episode;
using testing::random_tracks;

// Ego parked at the origin, one agent on the x axis at the given centers.
Episode on_axis(const std::vector<double>& agent_x) {
  std::vector<Point2> ego(agent_x.size(), Point2{0, 0}), agent;
  for (double x : agent_x) agent.push_back({x, 0});
  return make_episode({ego, agent});
}

double brute_force_min(const Episode& ep) {
  double best = INFINITY;
  for (std::size_t t = 1; t < ep.trace.size(); ++t) {
    for (std::size_t n = 0; n < ep.agent_ids.size(); ++n) {
      if (n == ep.ego_index) continue;
      const Point2 d = ep.trace[t].states[n].position - ep.trace[t].states[ep.ego_index].position;
      best = std::min(best, std::sqrt(d.x * d.x + d.y * d.y));
    }
  }
  return -best;
}

TEST(CriticalityScore, SmallTables) {
  // Index 0 is the initial state and is never scored.
  EXPECT_EQ(criticality_score(on_axis({0.5, 5, 2})), -2.0);
  const std::vector<Point2> ego{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
  const std::vector<Point2> a1{{1, 0}, {4, 0}, {3, 0}, {6, 0}}, a2{{0, 1}, {0, 7}, {0, 2.5}, {0, 8}};
  EXPECT_EQ(criticality_score(make_episode({ego, a1, a2})), -2.5);
}

TEST(CriticalityScore, MatchesExhaustiveTable) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> agents(2, 4), steps(10, 80);
  for (int i = 0; i < 200; ++i) {
    const Episode ep = make_episode(random_tracks(rng, agents(rng), steps(rng)));
    EXPECT_NEAR(criticality_score(ep), brute_force_min(ep), 1e-12);
  }
}

TEST(CriticalityScore, TranslationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shift(-1e3, 1e3);
  for (int i = 0; i < 50; ++i) {
    auto tracks = random_tracks(rng, 3, 40);
    const double g = criticality_score(make_episode(tracks));
    const Point2 d{shift(rng), shift(rng)};
    for (auto& tr : tracks)
      for (auto& p : tr) p = p + d;
    EXPECT_NEAR(criticality_score(make_episode(tracks)), g, 1e-9);
  }
}

TEST(ClosestApproach, TiesGoToEarliestThenLowestAgent) {
  const std::vector<Point2> ego{{0, 0}, {0, 0}, {0, 0}};
  const std::vector<Point2> a1{{9, 0}, {3, 0}, {2, 0}}, a2{{9, 9}, {0, 2}, {0, 2}};
  const CriticalPoint cp = closest_approach(make_episode({ego, a1, a2}));
  EXPECT_EQ(cp.timestep, 1);
  EXPECT_EQ(cp.agent, 2u);  // a1 reaches 2 only at t=2; a2 at t=1
  const std::vector<Point2> b1{{9, 0}, {0, 2}, {5, 0}}, b2{{9, 9}, {2, 0}, {5, 5}};
  const CriticalPoint tie = closest_approach(make_episode({ego, b1, b2}));
  EXPECT_EQ(tie.timestep, 1);
  EXPECT_EQ(tie.agent, 1u);
  EXPECT_EQ(tie.distance, 2.0);
  EXPECT_THROW(closest_approach(on_axis({5})), std::invalid_argument);
}

TEST(TtcMin, ClosingAtConstantRate) {
  // Gap 10 m closing at 5 m/s (0.5 m per 0.1 s step).
  EXPECT_DOUBLE_EQ(ttc_min(on_axis({14.5, 14.0})), 2.0);
  // The smallest instantaneous value wins as the gap shrinks.
  EXPECT_NEAR(ttc_min(on_axis({14.5, 14.0, 13.5})), 1.9, 1e-12);
}

TEST(TtcMin, OpeningOrContact) {
  EXPECT_EQ(ttc_min(on_axis({6, 7, 8, 9})), INFINITY);
  EXPECT_EQ(ttc_min(on_axis({6, 6, 6})), INFINITY);
  EXPECT_EQ(ttc_min(on_axis({9, 6, 4.5, 6})), 0.0);
  EXPECT_EQ(ttc_min(on_axis({9, 6, 4.0, 6})), 0.0);
}

TEST(TtcMin, NonIncreasingUnderShrinkingGaps) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> g0(5.0, 40.0), v(-3.0, 12.0), c(0.05, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double start = g0(rng), speed = v(rng), scale = c(rng);
    std::vector<double> base, shrunk;
    for (int t = 0; t < 20; ++t) {
      base.push_back(4.5 + start - speed * 0.1 * t);
      shrunk.push_back(4.5 + scale * start - speed * 0.1 * t);
    }
    EXPECT_LE(ttc_min(on_axis(shrunk)), ttc_min(on_axis(base)));
  }
}

TEST(TrajectoryDistance, Examples) {
  const std::vector<Point2> a{{0, 0}, {1, 0}, {2, 0}}, b{{0, 3}, {1, 3}, {2, 3}};
  EXPECT_EQ(trajectory_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(trajectory_distance(a, b), 3.0);
  std::vector<Point2> five, eight;
  for (int k = 0; k < 8; ++k) {
    if (k < 5) five.push_back({double(k), 2.0});
    eight.push_back({double(k), k < 5 ? 0.0 : 50.0});
  }
  EXPECT_DOUBLE_EQ(trajectory_distance(five, eight), 2.0);
  EXPECT_THROW(trajectory_distance({}, a), std::invalid_argument);
}

TEST(Asd, PrintedNormalization) {
  const std::vector<Point2> a{{0, 0}, {1, 0}}, b{{0, 4}, {1, 4}};
  const std::vector<std::vector<Point2>> same{a, a}, offset{a, b};
  EXPECT_EQ(asd(same), 0.0);
  EXPECT_DOUBLE_EQ(asd(offset), 2.0);
  EXPECT_DOUBLE_EQ(asd(offset, AsdConvention::kMeanPairwise), 4.0);
  const std::vector<std::vector<Point2>> one{a};
  EXPECT_THROW(asd(one), std::invalid_argument);
  EXPECT_EQ(asd_convention_from("mean_pairwise"), AsdConvention::kMeanPairwise);
  EXPECT_STREQ(asd_convention_name(AsdConvention::kPaper), "paper");
  EXPECT_THROW(asd_convention_from("median"), std::invalid_argument);
}

TEST(Asd, MatchesDoubleLoopAndIsPermutationInvariant) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(2, 9), len(3, 30);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Point2>> trajs;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) trajs.push_back(random_tracks(rng, 1, len(rng))[0]);
    // Full double loop over ordered pairs, halved, then the printed weight.
    double ordered = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::size_t m = std::min(trajs[i].size(), trajs[j].size());
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          s += std::hypot(trajs[i][k].x - trajs[j][k].x, trajs[i][k].y - trajs[j][k].y);
        ordered += s / double(m);
      }
    }
    const double expected = 0.5 * ordered / (double(n) * (n - 1));
    const double got = asd(trajs);
    EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, expected));
    EXPECT_GE(got, 0.0);
    std::shuffle(trajs.begin(), trajs.end(), rng);
    EXPECT_NEAR(asd(trajs), got, 1e-12 * std::max(1.0, got));
  }
}

TEST(CampaignStats, HandBuiltCampaign) {
  // A: agent closes at 10 m/s; B: fixed 8 m spacing, flagged as a collision;
  // C: agent closes at 5 m/s.
  Episode a = on_axis({14.5, 13.5, 12.5});
  Episode b = make_episode({{{0, 0}, {1, 0}, {2, 0}}, {{8, 0}, {9, 0}, {10, 0}}});
  b.collision = Collision{2, 0, 1};
  Episode c = on_axis({14.5, 14.0, 13.5});
  Episode failed = on_axis({1, 1, 1});
  failed.failed = true;
  const std::vector<Episode> eps{a, b, failed, c};

  const CampaignStats st = campaign_stats(eps);
  EXPECT_EQ(st.n, 3u);
  EXPECT_NEAR(st.coll_pct, 100.0 / 3.0, 1e-12);
  // min dist {12.5, 8, 13.5}.
  EXPECT_NEAR(st.min_dist.mean, 34.0 / 3.0, 1e-12);
  const double m = 34.0 / 3.0;
  const double var = ((12.5 - m) * (12.5 - m) + (8 - m) * (8 - m) + (13.5 - m) * (13.5 - m)) / 2.0;
  EXPECT_NEAR(st.min_dist.std, std::sqrt(var), 1e-12);
  EXPECT_NEAR(st.min_dist.std, 2.9297326385411577, 1e-12);
  // TTC {0.9, inf, 1.9}.
  EXPECT_EQ(st.ttc_inf_count, 1u);
  EXPECT_EQ(st.ttc_count, 2u);
  EXPECT_NEAR(st.ttc.mean, 1.4, 1e-12);
  EXPECT_NEAR(st.ttc.std, std::sqrt(0.5), 1e-12);
  // Ego distances d(A,B)=1, d(A,C)=0, d(B,C)=1; agent 4.5, 0.5, 5.
  EXPECT_NEAR(st.ego_asd, 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(st.agent_asd, 10.0 / 6.0, 1e-12);
  const CampaignStats mp = campaign_stats(eps, AsdConvention::kMeanPairwise);
  EXPECT_NEAR(mp.ego_asd, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(mp.agent_asd, 10.0 / 3.0, 1e-12);
}

TEST(CampaignStats, IdenticalEpisodesAndTooFew) {
  const Episode e = on_axis({20, 19, 18, 17});
  const std::vector<Episode> four(4, e);
  const CampaignStats st = campaign_stats(four);
  EXPECT_EQ(st.ego_asd, 0.0);
  EXPECT_EQ(st.agent_asd, 0.0);
  EXPECT_EQ(st.min_dist.std, 0.0);
  EXPECT_EQ(st.coll_pct, 0.0);
  const std::vector<Episode> one{e};
  EXPECT_THROW(campaign_stats(one), std::invalid_argument);
}

TEST(CampaignStats, CollisionRate) {
  std::vector<Episode> eps(4, on_axis({20, 19, 18}));
  eps[2].collision = Collision{2, 0, 1};
  EXPECT_EQ(campaign_stats(eps).coll_pct, 25.0);
}

TEST(ScoreEpisode, Consistency) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const Episode ep = make_episode(random_tracks(rng, 3, 30));
    const EpisodeScore s = score_episode(ep);
    EXPECT_EQ(s.g, -s.min_dist);
    EXPECT_EQ(s.g, criticality_score(ep));
    EXPECT_EQ(s.ttc_min, ttc_min(ep));
    EXPECT_FALSE(s.collided);
  }
}

}  // namespace
}  // namespace goalprobe
