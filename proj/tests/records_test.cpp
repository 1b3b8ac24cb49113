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

#include "goalprobe/records.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "support.hpp"

namespace goalprobe {
namespace {

using testing::make_episode;
using testing::random_tracks;

Episode sample_episode() {
  std::mt19937_64 rng(11);
  Episode ep = make_episode(random_tracks(rng, 3, 25));
  // Non-trivial headings and speeds so the round trip covers every field.
  for (auto& js : ep.trace) {
    for (std::size_t i = 0; i < js.states.size(); ++i) {
      js.states[i].heading = 0.1 * static_cast<double>(i) + 1e-3 * js.timestep;
      js.states[i].speed = 7.25 + 1.0 / 3.0 * static_cast<double>(i);
    }
  }
  ep.collision = Collision{24, 0, 2};
  return ep;
}

std::string to_jsonl(const Episode& ep) {
  std::ostringstream s;
  write_episode_jsonl(s, ep);
  return s.str();
}

TEST(EpisodeJsonl, RoundTripIsExact) {
  const Episode ep = sample_episode();
  std::istringstream in(to_jsonl(ep));
  EXPECT_EQ(read_episode_jsonl(in), ep);
}

TEST(EpisodeJsonl, RoundTripKeepsFailureInfo) {
  Episode ep = sample_episode();
  ep.collision.reset();
  ep.failed = true;
  ep.failure = "planner failed at t=10: boom";
  std::istringstream in(to_jsonl(ep));
  EXPECT_EQ(read_episode_jsonl(in), ep);
}

TEST(EpisodeJsonl, OneHeaderPlusOneLinePerState) {
  const Episode ep = sample_episode();
  const std::string text = to_jsonl(ep);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), ep.trace.size() + 1);
}

TEST(EpisodeJsonl, TruncatedFileNamesTheLine) {
  const std::string text = to_jsonl(sample_episode());
  // Cut in the middle of the 6th line.
  std::size_t pos = 0;
  for (int k = 0; k < 5; ++k) pos = text.find('\n', pos) + 1;
  std::istringstream in(text.substr(0, pos + 20));
  try {
    read_episode_jsonl(in);
    FAIL() << "expected a parse error";
  } catch (const RecordParseError& e) {
    EXPECT_EQ(e.line(), 6u);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
  }
}

TEST(EpisodeJsonl, MissingTailLinesAreDetected) {
  const std::string text = to_jsonl(sample_episode());
  std::size_t pos = 0;
  for (int k = 0; k < 10; ++k) pos = text.find('\n', pos) + 1;
  std::istringstream in(text.substr(0, pos));
  try {
    read_episode_jsonl(in);
    FAIL() << "expected a parse error";
  } catch (const RecordParseError& e) {
    EXPECT_EQ(e.line(), 11u);
  }
}

TEST(EpisodeJsonl, EmptyInputIsAnError) {
  std::istringstream in("");
  EXPECT_THROW(read_episode_jsonl(in), RecordParseError);
}

TEST(EpisodeJsonl, MissingAgentStateIsAnError) {
  std::string text = to_jsonl(sample_episode());
  const auto at = text.find("\"a1\":", text.find('\n'));
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 4, "\"zz\"");
  std::istringstream in(text);
  try {
    read_episode_jsonl(in);
    FAIL() << "expected a parse error";
  } catch (const RecordParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

CampaignResult sample_campaign() {
  CampaignResult r;
  r.scenario_id = "synthetic";
  EpisodeRecord ok;
  ok.iter = 0;
  ok.u = {0.5, 0.25};
  ok.goals = {{12.5, -3.5}};
  ok.episode = sample_episode();
  ok.metrics = EpisodeScore{-1.25, 1.25, std::numeric_limits<double>::infinity(), true};
  ok.objective = -1.25;
  ok.episode_file = "episodes/0000.jsonl";
  EpisodeRecord bad;
  bad.iter = 1;
  bad.u = {0.75, 0.125};
  bad.goals = {{40.0, 1.0}};
  bad.objective = -std::numeric_limits<double>::infinity();
  bad.error = "planner failed at t=0: nope";
  r.records = {ok, bad};
  return r;
}

TEST(CampaignJsonl, RoundTrip) {
  std::stringstream s;
  write_campaign_jsonl(s, sample_campaign());
  const auto entries = read_campaign_jsonl(s);
  ASSERT_EQ(entries.size(), 2u);

  EXPECT_EQ(entries[0].iter, 0);
  EXPECT_EQ(entries[0].u, (Prompt{0.5, 0.25}));
  ASSERT_EQ(entries[0].goal_world.size(), 1u);
  EXPECT_EQ(entries[0].goal_world[0], (Point2{12.5, -3.5}));
  EXPECT_EQ(entries[0].score, -1.25);
  EXPECT_EQ(entries[0].min_dist, 1.25);
  EXPECT_TRUE(std::isinf(entries[0].ttc_min));
  EXPECT_TRUE(entries[0].collided);
  EXPECT_FALSE(entries[0].failed);
  EXPECT_EQ(entries[0].episode_file, "episodes/0000.jsonl");

  EXPECT_TRUE(entries[1].failed);
  EXPECT_FALSE(entries[1].score.has_value());
  EXPECT_FALSE(entries[1].min_dist.has_value());
  EXPECT_EQ(entries[1].error, "planner failed at t=0: nope");
  EXPECT_EQ(entries[1].episode_file, "");
}

TEST(CampaignJsonl, InfinityIsStoredAsNull) {
  std::stringstream s;
  write_campaign_jsonl(s, sample_campaign());
  const std::string first = s.str().substr(0, s.str().find('\n'));
  EXPECT_NE(first.find("\"ttc_min\":null"), std::string::npos) << first;
  EXPECT_NE(first.find("\"goal_world\":[12.5,-3.5]"), std::string::npos) << first;
}

TEST(CampaignJsonl, BadLineIsReported) {
  std::stringstream s;
  write_campaign_jsonl(s, sample_campaign());
  std::istringstream in(s.str() + "{\"iter\": 2}\n");
  try {
    read_campaign_jsonl(in);
    FAIL() << "expected a parse error";
  } catch (const RecordParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2.0");
  EXPECT_EQ(format_number(-1.0 / 3.0), "-0.3333333333333333");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(std::stod(format_number(1.0 / 7.0)), 1.0 / 7.0);
}

TEST(StatsCsv, RowMatchesHeaderColumns) {
  CampaignStats st;
  st.n = 4;
  st.coll_pct = 25.0;
  st.min_dist = {3.5, 0.5};
  st.ttc = {1.5, 0.25};
  st.ttc_inf_count = 1;
  st.ego_asd = 0.75;
  st.agent_asd = 2.0;
  std::ostringstream s;
  write_stats_csv_row(s, "front", "bo", st, 7);
  const std::string row = s.str();
  EXPECT_EQ(row, "front,bo,4,25.0,3.5,0.5,1.5,0.25,1,0.75,2.0,7\n");
  const std::string header = kStatsCsvHeader;
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

}  // namespace
}  // namespace goalprobe
