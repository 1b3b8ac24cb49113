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

#ifndef GOALPROBE_SIM_HPP_
#define GOALPROBE_SIM_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goalprobe/kinematics.hpp"
#include "goalprobe/planner.hpp"
#include "goalprobe/scenario.hpp"

namespace goalprobe {

struct Collision {
  int timestep = 0;
  std::size_t first = 0;  // agent indices, first < second
  std::size_t second = 0;

  friend bool operator==(const Collision&, const Collision&) = default;
};

/// One closed-loop rollout. Self-contained: carries the agent footprints so
/// metrics and replay do not need the scenario.
struct Episode {
  std::string scenario_id;
  double dt = 0.1;
  std::size_t ego_index = 0;
  std::vector<AgentId> agent_ids;
  std::vector<double> lengths;
  std::vector<double> widths;
  std::vector<AgentId> goal_agents;  // simulated agents, goal-domain order
  std::vector<Point2> goals;
  std::vector<JointState> trace;  // trace[0] is the initial joint state
  std::optional<Collision> collision;
  bool failed = false;
  std::string failure;

  /// Position sequence of one agent over the trace.
  std::vector<Point2> positions(std::size_t agent) const;

  friend bool operator==(const Episode&, const Episode&) = default;
};

/// Per-agent behavior model. init() happens in the provider, once per
/// episode; step() must be deterministic given the joint state.
class AgentPolicy {
 public:
  virtual ~AgentPolicy() = default;
  virtual AgentState step(const JointState& world) const = 0;
};

class PolicyProvider {
 public:
  virtual ~PolicyProvider() = default;
  virtual std::unique_ptr<AgentPolicy> init(const Scenario& scenario, std::size_t agent, Point2 goal) const = 0;
};

struct ReactivePolicyParams {
  double stop_radius = 2.5;    // goal counts as reached inside this radius
  double comfort_decel = 2.0;  // a_comf of the stopping profile
  double speed_gain = 1.5;     // 1/s, speed-tracking P gain
  double corridor_length = 60.0;
  double corridor_half_width = 2.0;
  double min_gap = 2.0;       // IDM s0
  double time_headway = 1.0;  // IDM T
  double idm_accel = 2.0;     // IDM a
  double idm_decel = 3.0;     // IDM b
  VehicleLimits limits;
};

/// Goal-seeking agent with car following; the built-in stand-in for a
/// learned promptable policy.
class ReactivePolicy : public AgentPolicy {
 public:
  ReactivePolicy(const Scenario& scenario, std::size_t agent, Point2 goal, ReactivePolicyParams params = {});

  AgentState step(const JointState& world) const override;
  /// The control the policy applies in `world`, before integration.
  VehicleCommand command(const JointState& world) const;

  Point2 goal() const { return goal_; }

 private:
  std::size_t agent_;
  Point2 goal_;
  double desired_speed_;
  double dt_;
  std::vector<double> lengths_;
  ReactivePolicyParams params_;
};

class ReactivePolicyProvider : public PolicyProvider {
 public:
  explicit ReactivePolicyProvider(ReactivePolicyParams params = {}) : params_(params) {}
  std::unique_ptr<AgentPolicy> init(const Scenario& scenario, std::size_t agent, Point2 goal) const override;

 private:
  ReactivePolicyParams params_;
};

/// Single reactive step, free-function form.
inline AgentState reactive_policy_step(const ReactivePolicy& policy, const JointState& world) {
  return policy.step(world);
}

/// Footprint collision over every agent pair; lowest (first, second) wins.
std::optional<std::pair<std::size_t, std::size_t>> find_collision(const Scenario& scenario, const JointState& world);

/// Closed-loop rollout. `goals` and `policies` follow goal-domain order (one
/// per simulated agent). Planner exceptions truncate the episode and mark it
/// failed.
Episode simulate_episode(const Scenario& scenario, std::span<const Point2> goals, Planner& planner,
                         std::span<const std::unique_ptr<AgentPolicy>> policies);

/// Builds one policy per simulated agent from `provider`.
std::vector<std::unique_ptr<AgentPolicy>> make_policies(const Scenario& scenario, std::span<const Point2> goals,
                                                        const PolicyProvider& provider);

}  // namespace goalprobe

#endif  // GOALPROBE_SIM_HPP_
