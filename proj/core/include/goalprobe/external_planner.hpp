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

#ifndef GOALPROBE_EXTERNAL_PLANNER_HPP_
#define GOALPROBE_EXTERNAL_PLANNER_HPP_

#include <sys/types.h>

#include <cstdio>
#include <iosfwd>
#include <string>

#include "goalprobe/planner.hpp"

namespace goalprobe {

// Line protocol, one JSON object per line in each direction:
//   request  {"t": k, "replan_every": n, "agents": [{"id","x","y","heading","speed"}, ...]}
//   response {"states": [{"x","y","heading","speed"}, ...]}
// Agents appear in scenario order; the response holds `replan_every` states.

std::string encode_plan_request(const JointState& world, const Scenario& scenario);
JointState decode_plan_request(const std::string& line, const Scenario& scenario);
std::string encode_plan_response(const std::vector<AgentState>& states);
std::vector<AgentState> decode_plan_response(const std::string& line);

/// Answers plan requests from `in` with `planner` until end of input.
/// Returns the number of requests served.
std::size_t serve_planner_stdio(std::istream& in, std::ostream& out, const Scenario& scenario, Planner& planner);

/// Planner living in a child process (`/bin/sh -c command`) that speaks the
/// line protocol on its stdin/stdout.
class ProcessPlanner : public Planner {
 public:
  explicit ProcessPlanner(const std::string& command);
  ~ProcessPlanner() override;
  ProcessPlanner(const ProcessPlanner&) = delete;
  ProcessPlanner& operator=(const ProcessPlanner&) = delete;

  std::vector<AgentState> plan(const JointState& world, const Scenario& scenario) override;

 private:
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace goalprobe

#endif  // GOALPROBE_EXTERNAL_PLANNER_HPP_
