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

#include "goalprobe/scenario.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "support.hpp"

namespace goalprobe {
namespace {

using nlohmann::json;

// Single straight lane along +x from the origin; the simulated car sits at its
// start, the ego 10 m further back.
json base_doc() {
  return json::parse(R"({
    "id": "unit",
    "map": {"lanes": [
      {"id": "main", "centerline": [[0, 0], [200, 0]], "width": 4.0}
    ]},
    "agents": [
      {"id": "ego", "role": "ego", "x": -10, "y": 0, "heading": 0, "speed": 10, "length": 4.5, "width": 1.8},
      {"id": "car", "role": "simulated", "x": 0, "y": 0, "heading": 0, "speed": 10, "length": 4.5, "width": 1.8}
    ],
    "ego_goal": {"x": 150, "y": 0},
    "goal_domains": [
      {"agent_id": "car", "lane": "main", "s_min": 0, "s_max": 100, "l_min": -2, "l_max": 2}
    ],
    "sim": {"dt": 0.1, "horizon_steps": 40, "replan_every": 5}
  })");
}

std::string error_path(const json& doc) {
  try {
    load_scenario(doc.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(LoadScenario, PresetsLoadWithOneSimulatedAgent) {
  for (const char* id : {"front", "front_right", "behind"}) {
    const Scenario sc = testing::preset(id);
    EXPECT_EQ(sc.id, id);
    EXPECT_EQ(sc.agents.size(), 2u);
    EXPECT_EQ(sc.simulated_indices().size(), 1u);
    EXPECT_EQ(sc.map.lanes().size(), 2u);
    EXPECT_EQ(sc.prompt_dim(), 2u);
    // Ego heads for the right lane in every preset.
    EXPECT_EQ(sc.map.nearest_lane(sc.ego_goal).lane_index, *sc.map.find("right"));
  }
}

TEST(LoadScenario, PresetPlacementsMatchTheirNames) {
  const auto rel = [](const Scenario& sc) {
    const auto& npc = sc.agents[sc.simulated_indices()[0]].initial_state.position;
    return npc - sc.agents[sc.ego_index()].initial_state.position;
  };
  EXPECT_GT(rel(testing::preset("front")).x, 0.0);
  EXPECT_EQ(rel(testing::preset("front")).y, 0.0);
  EXPECT_GT(rel(testing::preset("front_right")).x, 0.0);
  EXPECT_LT(rel(testing::preset("front_right")).y, 0.0);
  EXPECT_LT(rel(testing::preset("behind")).x, 0.0);
}

TEST(LoadScenario, DefaultsForOptionalSections) {
  const Scenario sc = load_scenario(base_doc().dump());
  EXPECT_EQ(sc.planner.d_safe, 3.0);
  EXPECT_EQ(sc.planner.horizon_steps, 30);
  EXPECT_EQ(sc.sim.v_max, 40.0);
  EXPECT_FALSE(sc.agents[1].desired_speed.has_value());
  EXPECT_EQ(sc.agents[1].cruise_speed(), 10.0);
}

TEST(LoadScenario, MissingGoalDomain) {
  json d = base_doc();
  d["goal_domains"] = json::array();
  EXPECT_EQ(error_path(d), "goal_domains");
}

TEST(LoadScenario, InvertedSRange) {
  json d = base_doc();
  d["goal_domains"][0]["s_min"] = 120;
  EXPECT_EQ(error_path(d), "goal_domains[0].s_min");
}

TEST(LoadScenario, DanglingLaneReferences) {
  json d = base_doc();
  d["goal_domains"][0]["lane"] = "nowhere";
  EXPECT_EQ(error_path(d), "goal_domains[0].lane");
  d = base_doc();
  d["map"]["lanes"][0]["left_neighbor"] = "nowhere";
  EXPECT_EQ(error_path(d), "map.lanes[0].left_neighbor");
}

TEST(LoadScenario, ZeroSimulatedAgents) {
  json d = base_doc();
  d["agents"].erase(1);
  d["goal_domains"] = json::array();
  EXPECT_EQ(error_path(d), "agents");
}

TEST(LoadScenario, DomainBehindAgent) {
  json d = base_doc();
  d["agents"][1]["x"] = 10;
  d["goal_domains"][0]["s_min"] = 5;
  EXPECT_EQ(error_path(d), "goal_domains[0].s_min");
  d["goal_domains"][0]["s_min"] = 10;  // level with the agent is still ahead
  EXPECT_EQ(error_path(d), "<no error>");
}

TEST(LoadScenario, LateralRangeLimitedToDrivableWidth) {
  json d = base_doc();
  d["goal_domains"][0]["l_max"] = 2.5;
  EXPECT_EQ(error_path(d), "goal_domains[0].l_min");
}

TEST(LoadScenario, SchemaErrorsNameTheField) {
  json d = base_doc();
  d["agents"][0].erase("speed");
  EXPECT_EQ(error_path(d), "agents[0].speed");
  d = base_doc();
  d["sim"]["dt"] = "fast";
  EXPECT_EQ(error_path(d), "sim.dt");
  d = base_doc();
  d["sim"]["horizon_steps"] = 0;
  EXPECT_EQ(error_path(d), "sim.horizon_steps");
  d = base_doc();
  d["agents"][1]["role"] = "ego";
  EXPECT_EQ(error_path(d), "agents");
  EXPECT_THROW(load_scenario("{not json"), ConfigError);
}

TEST(LoadScenario, SerializationRoundTrip) {
  for (const char* id : {"front", "front_right", "behind"}) {
    const std::string once = serialize_scenario(testing::preset(id));
    const std::string twice = serialize_scenario(load_scenario(once));
    EXPECT_EQ(once, twice);
  }
}

TEST(PromptToWorld, CornersAndMidpoint) {
  const Scenario sc = load_scenario(base_doc().dump());
  const GoalDomain& dom = sc.goal_domains[0];
  const double lo[] = {0, 0}, hi[] = {1, 1}, mid[] = {0.5, 0.5};
  EXPECT_EQ(prompt_to_world(dom, lo, sc.map), (Point2{0, -2}));
  EXPECT_EQ(prompt_to_world(dom, hi, sc.map), (Point2{100, 2}));
  EXPECT_EQ(prompt_to_world(dom, mid, sc.map), (Point2{50, 0}));
}

TEST(PromptToWorld, ImageProjectsBackIntoDomain) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* id : {"front", "front_right", "behind"}) {
    const Scenario sc = testing::preset(id);
    const GoalDomain& dom = sc.goal_domains[0];
    const Polyline& ref = sc.map.lane(dom.reference_lane).centerline;
    for (int i = 0; i < 500; ++i) {
      const double p[] = {u(rng), u(rng)};
      const auto pr = project_to_polyline(prompt_to_world(dom, p, sc.map), ref);
      EXPECT_GE(pr.s, dom.s_min - 1e-6);
      EXPECT_LE(pr.s, dom.s_max + 1e-6);
      EXPECT_GE(pr.l, dom.l_min - 1e-6);
      EXPECT_LE(pr.l, dom.l_max + 1e-6);
      EXPECT_NEAR(pr.s, dom.s_min + p[0] * (dom.s_max - dom.s_min), 1e-6);
      EXPECT_NEAR(pr.l, dom.l_min + p[1] * (dom.l_max - dom.l_min), 1e-6);
    }
  }
}

TEST(PromptsToGoals, SplitsTheJointPrompt) {
  json d = base_doc();
  d["agents"].push_back({{"id", "car2"},
                         {"role", "simulated"},
                         {"x", 20},
                         {"y", 0},
                         {"heading", 0},
                         {"speed", 8},
                         {"length", 4.5},
                         {"width", 1.8}});
  d["goal_domains"].push_back(
      {{"agent_id", "car2"}, {"lane", "main"}, {"s_min", 50}, {"s_max", 150}, {"l_min", 0}, {"l_max", 1}});
  const Scenario sc = load_scenario(d.dump());
  EXPECT_EQ(sc.prompt_dim(), 4u);
  const double u[] = {0.5, 0.5, 0.0, 1.0};
  const auto goals = prompts_to_goals(sc, u);
  ASSERT_EQ(goals.size(), 2u);
  EXPECT_EQ(goals[0], (Point2{50, 0}));
  EXPECT_EQ(goals[1], (Point2{50, 1}));
  const double short_u[] = {0.5, 0.5};
  EXPECT_THROW(prompts_to_goals(sc, short_u), std::invalid_argument);
}

TEST(DrivableLateralRange, IncludesDeclaredNeighbors) {
  const Scenario sc = testing::preset("front");
  const auto [lo, hi] = drivable_lateral_range(sc.map, "left");
  EXPECT_DOUBLE_EQ(lo, -5.25);
  EXPECT_DOUBLE_EQ(hi, 1.75);
}

}  // namespace
}  // namespace goalprobe
