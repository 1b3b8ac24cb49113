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

#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace goalprobe {

using nlohmann::json;

namespace {

json state_json(const AgentState& s) {
  return {{"x", s.position.x}, {"y", s.position.y}, {"heading", s.heading}, {"speed", s.speed}};
}

AgentState state_from(const json& j) {
  return {
      {j.at("x").get<double>(), j.at("y").get<double>()}, j.at("heading").get<double>(), j.at("speed").get<double>()};
}

}  // namespace

std::string encode_plan_request(const JointState& world, const Scenario& sc) {
  json agents = json::array();
  for (std::size_t i = 0; i < world.states.size(); ++i) {
    json a = state_json(world.states[i]);
    a["id"] = sc.agents.at(i).id;
    agents.push_back(std::move(a));
  }
  return json{{"t", world.timestep}, {"replan_every", sc.sim.replan_every}, {"agents", agents}}.dump();
}

JointState decode_plan_request(const std::string& line, const Scenario& sc) {
  try {
    const json j = json::parse(line);
    JointState js;
    js.timestep = j.at("t").get<int>();
    const json& agents = j.at("agents");
    if (agents.size() != sc.agents.size()) throw std::runtime_error("request has the wrong number of agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (agents[i].at("id").get<std::string>() != sc.agents[i].id) {
        throw std::runtime_error("request agent " + std::to_string(i) + " is not '" + sc.agents[i].id + "'");
      }
      js.states.push_back(state_from(agents[i]));
    }
    return js;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed plan request: ") + e.what());
  }
}

std::string encode_plan_response(const std::vector<AgentState>& states) {
  json arr = json::array();
  for (const auto& s : states) arr.push_back(state_json(s));
  return json{{"states", arr}}.dump();
}

std::vector<AgentState> decode_plan_response(const std::string& line) {
  try {
    const json j = json::parse(line);
    std::vector<AgentState> out;
    for (const auto& s : j.at("states")) out.push_back(state_from(s));
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed plan response: ") + e.what());
  }
}

std::size_t serve_planner_stdio(std::istream& in, std::ostream& out, const Scenario& sc, Planner& planner) {
  std::size_t served = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const JointState world = decode_plan_request(line, sc);
    out << encode_plan_response(planner.plan(world, sc)) << '\n' << std::flush;
    ++served;
  }
  return served;
}

ProcessPlanner::ProcessPlanner(const std::string& command) {
  int down[2];  // parent -> child
  int up[2];    // child -> parent
  if (pipe(down) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  if (pipe(up) != 0) {
    close(down[0]);
    close(down[1]);
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }
  pid_ = fork();
  if (pid_ < 0) throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(down[0], STDIN_FILENO);
    dup2(up[1], STDOUT_FILENO);
    close(down[0]);
    close(down[1]);
    close(up[0]);
    close(up[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(down[0]);
  close(up[1]);
  to_child_ = fdopen(down[1], "w");
  from_child_ = fdopen(up[0], "r");
  if (!to_child_ || !from_child_) throw std::runtime_error("fdopen failed for planner pipes");
  // A dead child must surface as a write error, not a signal.
  std::signal(SIGPIPE, SIG_IGN);
}

ProcessPlanner::~ProcessPlanner() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::vector<AgentState> ProcessPlanner::plan(const JointState& world, const Scenario& sc) {
  const std::string request = encode_plan_request(world, sc) + "\n";
  if (std::fputs(request.c_str(), to_child_) == EOF || std::fflush(to_child_) != 0) {
    throw std::runtime_error("external planner closed its input");
  }
  std::string line;
  char buf[4096];
  for (;;) {
    if (!std::fgets(buf, sizeof buf, from_child_)) throw std::runtime_error("external planner exited without a plan");
    line += buf;
    if (!line.empty() && line.back() == '\n') break;
  }
  line.pop_back();
  return decode_plan_response(line);
}

}  // namespace goalprobe
