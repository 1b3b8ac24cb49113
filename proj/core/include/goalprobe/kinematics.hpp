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

#ifndef GOALPROBE_KINEMATICS_HPP_
#define GOALPROBE_KINEMATICS_HPP_

#include <vector>

#include "goalprobe/geom.hpp"
#include "goalprobe/scenario.hpp"

namespace goalprobe {

/// Joint state of every scenario agent at one timestep, in scenario agent
/// order.
struct JointState {
  int timestep = 0;
  std::vector<AgentState> states;

  friend bool operator==(const JointState&, const JointState&) = default;
};

JointState initial_joint_state(const Scenario& scenario);

struct VehicleCommand {
  double accel = 0.0;  // m/s^2
  double steer = 0.0;  // front wheel angle, rad
};

struct VehicleLimits {
  double wheelbase = 2.8;
  double max_steer = 0.5;
  double min_accel = -6.0;
  double max_accel = 3.0;
  double v_max = 40.0;
};

/// One kinematic-bicycle step. Speed is clamped to [0, v_max]; position
/// advances with the mean of the old and new speed, so displacement never
/// exceeds v*dt + a*dt^2/2.
AgentState bicycle_step(const AgentState& state, VehicleCommand command, double dt, const VehicleLimits& limits);

/// Pure-pursuit front-wheel angle toward `target`, clamped to max_steer.
double pure_pursuit_steer(const AgentState& state, Point2 target, const VehicleLimits& limits);

/// Lookahead distance used by every pure-pursuit controller here.
inline double lookahead_distance(double speed) { return speed > 5.0 ? speed : 5.0; }

OrientedBox footprint(const AgentConfig& agent, const AgentState& state, double margin = 0.0);

}  // namespace goalprobe

#endif  // GOALPROBE_KINEMATICS_HPP_
