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

#include "goalprobe/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace goalprobe {

JointState initial_joint_state(const Scenario& scenario) {
  JointState js;
  js.timestep = 0;
  js.states.reserve(scenario.agents.size());
  for (const auto& a : scenario.agents) js.states.push_back(a.initial_state);
  return js;
}

AgentState bicycle_step(const AgentState& s, VehicleCommand cmd, double dt, const VehicleLimits& limits) {
  const double accel = std::clamp(cmd.accel, limits.min_accel, limits.max_accel);
  const double steer = std::clamp(cmd.steer, -limits.max_steer, limits.max_steer);
  const double v_next = std::clamp(s.speed + accel * dt, 0.0, limits.v_max);
  const double v_mean = 0.5 * (s.speed + v_next);
  const double dtheta = v_mean / limits.wheelbase * std::tan(steer) * dt;
  const double mid = s.heading + 0.5 * dtheta;
  AgentState out;
  out.position = {s.position.x + v_mean * std::cos(mid) * dt, s.position.y + v_mean * std::sin(mid) * dt};
  out.heading = normalize_angle(s.heading + dtheta);
  out.speed = v_next;
  return out;
}

double pure_pursuit_steer(const AgentState& s, Point2 target, const VehicleLimits& limits) {
  const Point2 d = target - s.position;
  const double dist = std::hypot(d.x, d.y);
  if (dist < 1e-6) return 0.0;
  const double alpha = normalize_angle(std::atan2(d.y, d.x) - s.heading);
  const double curvature = 2.0 * std::sin(alpha) / dist;
  return std::clamp(std::atan(limits.wheelbase * curvature), -limits.max_steer, limits.max_steer);
}

OrientedBox footprint(const AgentConfig& agent, const AgentState& state, double margin) {
  return OrientedBox{state.position, state.heading, agent.length + 2.0 * margin, agent.width + 2.0 * margin};
}

}  // namespace goalprobe
