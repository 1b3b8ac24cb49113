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

#include "goalprobe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace goalprobe {

std::vector<Point2> Episode::positions(std::size_t agent) const {
  std::vector<Point2> out;
  out.reserve(trace.size());
  for (const auto& js : trace) out.push_back(js.states.at(agent).position);
  return out;
}

ReactivePolicy::ReactivePolicy(const Scenario& sc, std::size_t agent, Point2 goal, ReactivePolicyParams params)
    : agent_(agent), goal_(goal), dt_(sc.sim.dt), params_(params) {
  params_.limits.v_max = sc.sim.v_max;
  desired_speed_ = std::min(sc.agents.at(agent).cruise_speed(), sc.sim.v_max);
  lengths_.reserve(sc.agents.size());
  for (const auto& a : sc.agents) lengths_.push_back(a.length);
}

VehicleCommand ReactivePolicy::command(const JointState& world) const {
  const AgentState& self = world.states.at(agent_);
  const Point2 heading{std::cos(self.heading), std::sin(self.heading)};
  const Point2 to_goal = goal_ - self.position;
  const double dist = std::hypot(to_goal.x, to_goal.y);
  const bool ahead = dot(to_goal, heading) > 0.0;
  const double remaining = ahead ? std::max(0.0, dist - params_.stop_radius) : 0.0;
  const auto& lim = params_.limits;

  VehicleCommand cmd;
  const double v_target = std::min(desired_speed_, std::sqrt(2.0 * params_.comfort_decel * remaining));
  const double a_goal = std::clamp(params_.speed_gain * (v_target - self.speed), lim.min_accel, lim.max_accel);

  // IDM interaction term against the closest agent in the forward corridor.
  double a_follow = lim.max_accel;
  double nearest = std::numeric_limits<double>::infinity();
  std::size_t leader = world.states.size();
  for (std::size_t j = 0; j < world.states.size(); ++j) {
    if (j == agent_) continue;
    const Point2 rel = world.states[j].position - self.position;
    const double along = dot(rel, heading);
    const double across = cross(heading, rel);
    if (along > 0.0 && along <= params_.corridor_length && std::abs(across) <= params_.corridor_half_width &&
        along < nearest) {
      nearest = along;
      leader = j;
    }
  }
  if (leader != world.states.size()) {
    const AgentState& lead = world.states[leader];
    const double gap = std::max(0.1, nearest - 0.5 * (lengths_[agent_] + lengths_[leader]));
    const double v = self.speed;
    const double v_lead = lead.speed * std::cos(lead.heading - self.heading);
    const double desired_gap =
        params_.min_gap +
        std::max(0.0, v * params_.time_headway +
                          v * (v - v_lead) / (2.0 * std::sqrt(params_.idm_accel * params_.idm_decel)));
    a_follow =
        std::clamp(params_.idm_accel * (1.0 - (desired_gap / gap) * (desired_gap / gap)), lim.min_accel, lim.max_accel);
  }
  cmd.accel = std::clamp(std::min(a_goal, a_follow), lim.min_accel, lim.max_accel);

  if (ahead && dist > params_.stop_radius) {
    const double reach = std::min(lookahead_distance(self.speed), dist);
    cmd.steer = pure_pursuit_steer(self, self.position + (reach / dist) * to_goal, lim);
  }
  return cmd;
}

AgentState ReactivePolicy::step(const JointState& world) const {
  return bicycle_step(world.states.at(agent_), command(world), dt_, params_.limits);
}

std::unique_ptr<AgentPolicy> ReactivePolicyProvider::init(const Scenario& sc, std::size_t agent, Point2 goal) const {
  return std::make_unique<ReactivePolicy>(sc, agent, goal, params_);
}

std::optional<std::pair<std::size_t, std::size_t>> find_collision(const Scenario& sc, const JointState& world) {
  const std::size_t n = sc.agents.size();
  for (std::size_t i = 0; i < n; ++i) {
    const OrientedBox a = footprint(sc.agents[i], world.states[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (boxes_overlap(a, footprint(sc.agents[j], world.states[j]))) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

std::vector<std::unique_ptr<AgentPolicy>> make_policies(const Scenario& sc, std::span<const Point2> goals,
                                                        const PolicyProvider& provider) {
  const auto sim_idx = sc.simulated_indices();
  if (goals.size() != sim_idx.size()) throw std::invalid_argument("one goal per simulated agent is required");
  std::vector<std::unique_ptr<AgentPolicy>> out;
  for (std::size_t k = 0; k < sim_idx.size(); ++k) out.push_back(provider.init(sc, sim_idx[k], goals[k]));
  return out;
}

Episode simulate_episode(const Scenario& sc, std::span<const Point2> goals, Planner& planner,
                         std::span<const std::unique_ptr<AgentPolicy>> policies) {
  const auto sim_idx = sc.simulated_indices();
  if (goals.size() != sim_idx.size() || policies.size() != sim_idx.size()) {
    throw std::invalid_argument("one goal and one policy per simulated agent are required");
  }
  Episode ep;
  ep.scenario_id = sc.id;
  ep.dt = sc.sim.dt;
  ep.ego_index = sc.ego_index();
  for (const auto& a : sc.agents) {
    ep.agent_ids.push_back(a.id);
    ep.lengths.push_back(a.length);
    ep.widths.push_back(a.width);
  }
  for (std::size_t k = 0; k < sim_idx.size(); ++k) ep.goal_agents.push_back(sc.agents[sim_idx[k]].id);
  ep.goals.assign(goals.begin(), goals.end());
  ep.trace.reserve(static_cast<std::size_t>(sc.sim.horizon_steps) + 1);
  ep.trace.push_back(initial_joint_state(sc));

  if (const auto hit = find_collision(sc, ep.trace.back())) {
    ep.collision = Collision{0, hit->first, hit->second};
    return ep;
  }

  const std::size_t ego = ep.ego_index;
  const auto replan = static_cast<std::size_t>(sc.sim.replan_every);
  std::vector<AgentState> plan;
  for (int t = 0; t < sc.sim.horizon_steps; ++t) {
    const JointState& now = ep.trace.back();
    const auto phase = static_cast<std::size_t>(t) % replan;
    if (phase == 0) {
      try {
        plan = planner.plan(now, sc);
        if (plan.size() != replan) {
          throw std::runtime_error("planner returned " + std::to_string(plan.size()) + " states, expected " +
                                   std::to_string(replan));
        }
      } catch (const std::exception& e) {
        ep.failed = true;
        ep.failure = "planner failed at t=" + std::to_string(t) + ": " + e.what();
        return ep;
      }
    }
    JointState next;
    next.timestep = t + 1;
    next.states.resize(now.states.size());
    next.states[ego] = plan[phase];
    for (std::size_t k = 0; k < sim_idx.size(); ++k) next.states[sim_idx[k]] = policies[k]->step(now);
    ep.trace.push_back(std::move(next));

    if (const auto hit = find_collision(sc, ep.trace.back())) {
      ep.collision = Collision{t + 1, hit->first, hit->second};
      break;
    }
  }
  return ep;
}

}  // namespace goalprobe
