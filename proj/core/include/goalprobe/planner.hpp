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

#ifndef GOALPROBE_PLANNER_HPP_
#define GOALPROBE_PLANNER_HPP_

#include <array>
#include <vector>

#include "goalprobe/kinematics.hpp"
#include "goalprobe/scenario.hpp"

namespace goalprobe {

/// Planner under test. plan() must be deterministic and return exactly
/// `scenario.sim.replan_every` future ego states (steps t+1 .. t+replan_every).
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::vector<AgentState> plan(const JointState& world, const Scenario& scenario) = 0;
};

/// Future positions of one agent; waypoint k is the state at step k + 1.
struct Prediction {
  std::size_t agent_index = 0;
  std::vector<Point2> waypoints;
  std::vector<double> headings;
};

/// Constant speed along the nearest lane centerline, lateral offset decaying
/// toward the center with a 1 s time constant. Agents more than 10 m from
/// every centerline are extrapolated in a straight line.
Prediction predict_constant_velocity(const AgentState& agent, const MapModel& map, int horizon, double dt);

struct PlanCandidate {
  LaneId target_lane;
  double accel = 0.0;
  std::vector<AgentState> states;  // horizon steps, excluding the current state
  double cost = 0.0;
  double min_clearance = 0.0;
  bool footprint_conflict = false;
  bool feasible = false;
};

inline constexpr std::array<double, 7> kAccelGrid = {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};

/// Lane-tracking receding-horizon planner over a {lane} x {accel} lattice.
class ReferencePlanner : public Planner {
 public:
  std::vector<AgentState> plan(const JointState& world, const Scenario& scenario) override;

  /// Every candidate in enumeration order: lanes in map order (current lane
  /// and its neighbors), accelerations ascending.
  std::vector<PlanCandidate> candidates(const JointState& world, const Scenario& scenario) const;
  /// Index of the chosen candidate.
  static std::size_t select(const std::vector<PlanCandidate>& candidates);
};

/// Rollout of one lattice candidate: pure pursuit onto `lane` at constant accel.
std::vector<AgentState> rollout_lane_tracking(const AgentState& start, const Lane& lane, double accel, int steps,
                                              double dt, const VehicleLimits& limits);

}  // namespace goalprobe

#endif  // GOALPROBE_PLANNER_HPP_
