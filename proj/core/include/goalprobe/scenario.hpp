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

#ifndef GOALPROBE_SCENARIO_HPP_
#define GOALPROBE_SCENARIO_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalprobe/geom.hpp"

namespace goalprobe {

using AgentId = std::string;
using LaneId = std::string;

struct AgentState {
  Point2 position;
  double heading = 0.0;
  double speed = 0.0;  // m/s, >= 0

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Raised by scenario loading; `path()` names the offending field, e.g.
/// `goal_domains[0].s_min`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Lane {
  LaneId id;
  Polyline centerline;
  double width = 3.5;
  std::optional<LaneId> left_neighbor;
  std::optional<LaneId> right_neighbor;
};

struct LaneProjection {
  std::size_t lane_index = 0;
  PolylineProjection projection;
};

class MapModel {
 public:
  MapModel() = default;
  explicit MapModel(std::vector<Lane> lanes) : lanes_(std::move(lanes)) {}

  const std::vector<Lane>& lanes() const { return lanes_; }
  /// Index into lanes(), or nullopt.
  std::optional<std::size_t> find(const LaneId& id) const;
  const Lane& lane(const LaneId& id) const;

  /// Lane whose centerline is closest to `p`; earlier lanes win ties.
  LaneProjection nearest_lane(Point2 p) const;

 private:
  std::vector<Lane> lanes_;
};

enum class AgentRole { kEgo, kSimulated };

struct AgentConfig {
  AgentId id;
  AgentRole role = AgentRole::kSimulated;
  double length = 4.5;
  double width = 1.8;
  AgentState initial_state;
  /// Cruise speed of the built-in reactive policy; unset means "keep the
  /// initial speed".
  std::optional<double> desired_speed;

  double cruise_speed() const { return desired_speed.value_or(initial_state.speed); }
};

/// Rectangle in the (s, l) frame of `reference_lane`.
struct GoalDomain {
  AgentId agent_id;
  LaneId reference_lane;
  double s_min = 0.0;
  double s_max = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;
};

struct SimConfig {
  double dt = 0.1;
  int horizon_steps = 80;
  int replan_every = 5;
  double v_max = 40.0;  // kinematic cap shared by every agent
};

struct PlannerConfig {
  double d_safe = 3.0;            // center-to-center clearance against predictions
  double footprint_margin = 0.5;  // box inflation for the footprint check
  int horizon_steps = 30;
  double comfort_weight = 0.1;
  double v_max = 30.0;
};

struct Scenario {
  std::string id;
  MapModel map;
  std::vector<AgentConfig> agents;
  Point2 ego_goal;
  std::vector<GoalDomain> goal_domains;  // one per simulated agent, agent order
  SimConfig sim;
  PlannerConfig planner;

  std::size_t ego_index() const;
  /// Indices of simulated agents in config order.
  std::vector<std::size_t> simulated_indices() const;
  std::size_t agent_index(const AgentId& id) const;
  const GoalDomain& goal_domain(const AgentId& id) const;
  /// Dimension of the joint prompt cube: 2 per simulated agent.
  std::size_t prompt_dim() const { return 2 * goal_domains.size(); }
};

/// Parses and validates a scenario document (JSON).
Scenario load_scenario(const std::string& config_text);
Scenario load_scenario_file(const std::string& path);

/// Inverse of load_scenario.
std::string serialize_scenario(const Scenario& scenario);

/// Re-checks every invariant; throws ConfigError.
void validate(const Scenario& scenario);

/// Affine map of u in [0,1]^2 onto the domain rectangle, then onto the
/// reference lane.
Point2 prompt_to_world(const GoalDomain& domain, std::span<const double> u, const MapModel& map);

/// Splits a joint prompt (2 per simulated agent, goal-domain order) into world
/// goals, one per simulated agent.
std::vector<Point2> prompts_to_goals(const Scenario& scenario, std::span<const double> u);

/// Lateral interval [lo, hi] covered by the reference lane and its direct
/// neighbors, measured in the reference lane's frame.
std::pair<double, double> drivable_lateral_range(const MapModel& map, const LaneId& reference_lane);

}  // namespace goalprobe

#endif  // GOALPROBE_SCENARIO_HPP_
