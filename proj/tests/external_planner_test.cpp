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

#include "goalprobe/external_planner.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "goalprobe/campaign.hpp"
#include "goalprobe/kinematics.hpp"
#include "support.hpp"

namespace goalprobe {
namespace {

using testing::preset;
using testing::preset_path;

TEST(PlanProtocol, RequestRoundTrip) {
  const Scenario sc = preset("front");
  JointState js = initial_joint_state(sc);
  js.timestep = 15;
  js.states[1].heading = 0.1 + 1.0 / 3.0;
  EXPECT_EQ(decode_plan_request(encode_plan_request(js, sc), sc), js);
}

TEST(PlanProtocol, ResponseRoundTrip) {
  const std::vector<AgentState> states = {{{1.0 / 3.0, -2.5}, 0.01, 14.2}, {{2.0, 1e-17}, -0.5, 0.0}};
  EXPECT_EQ(decode_plan_response(encode_plan_response(states)), states);
}

TEST(PlanProtocol, RejectsForeignAgents) {
  const Scenario sc = preset("front");
  Scenario other = sc;
  other.agents[1].id = "someone_else";
  const std::string req = encode_plan_request(initial_joint_state(sc), sc);
  EXPECT_THROW(decode_plan_request(req, other), std::runtime_error);
  EXPECT_THROW(decode_plan_request("{\"t\": 0}", sc), std::runtime_error);
  EXPECT_THROW(decode_plan_response("not json"), std::runtime_error);
}

TEST(ServePlannerStdio, AnswersEachRequestLine) {
  const Scenario sc = preset("front");
  const JointState js = initial_joint_state(sc);
  std::istringstream in(encode_plan_request(js, sc) + "\n\n" + encode_plan_request(js, sc) + "\n");
  std::ostringstream out;
  ReferencePlanner planner;
  EXPECT_EQ(serve_planner_stdio(in, out, sc, planner), 2u);

  ReferencePlanner direct;
  const std::string expected = encode_plan_response(direct.plan(js, sc)) + "\n";
  EXPECT_EQ(out.str(), expected + expected);
}

TEST(ProcessPlanner, SubprocessMatchesInProcessPlanner) {
  const Scenario sc = preset("front");
  const Prompt u = {0.3, 0.7};
  const std::string cmd = std::string(GOALPROBE_TOOL_PATH) + " plan-stdio " + preset_path("front.scn");
  ProcessPlanner external(cmd);
  ReferencePlanner internal;
  const ReactivePolicyProvider engine;
  const auto a = evaluate_prompt(sc, u, 0, engine, external, criticality_score);
  const auto b = evaluate_prompt(sc, u, 0, engine, internal, criticality_score);
  ASSERT_FALSE(a.failed()) << a.error;
  EXPECT_EQ(a.episode, b.episode);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(ProcessPlanner, DeadChildFailsTheEpisode) {
  const Scenario sc = preset("front");
  ProcessPlanner external("exit 0");
  const auto rec = evaluate_prompt(sc, {0.5, 0.5}, 0, ReactivePolicyProvider{}, external, criticality_score);
  EXPECT_TRUE(rec.failed());
  EXPECT_EQ(rec.error.rfind("planner failed at t=0: ", 0), 0u) << rec.error;
}

}  // namespace
}  // namespace goalprobe
