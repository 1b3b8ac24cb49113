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

#include "goalprobe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace goalprobe {

namespace {

constexpr double kLateralTimeConstant = 1.0;  // s
constexpr double kOffRoadDistance = 10.0;     // m

}  // namespace

Prediction predict_constant_velocity(const AgentState& agent, const MapModel& map, int horizon, double dt) {
  Prediction p;
  p.waypoints.reserve(static_cast<std::size_t>(horizon));
  p.headings.reserve(static_cast<std::size_t>(horizon));
  const auto nearest = map.lanes().empty() ? LaneProjection{} : map.nearest_lane(agent.position);
  if (map.lanes().empty() || nearest.projection.distance > kOffRoadDistance) {
    const Point2 dir{std::cos(agent.heading), std::sin(agent.heading)};
    for (int k = 1; k <= horizon; ++k) {
      p.waypoints.push_back(agent.position + (agent.speed * dt * k) * dir);
      p.headings.push_back(agent.heading);
    }
    return p;
  }
  const Polyline& line = map.lanes()[nearest.lane_index].centerline;
  const double s0 = nearest.projection.s;
  const double l0 = nearest.projection.l;
  for (int k = 1; k <= horizon; ++k) {
    const double s = std::min(s0 + k * agent.speed * dt, line.length());
    // A standing vehicle cannot move sideways.
    const double l = agent.speed > 0.0 ? l0 * std::exp(-k * dt / kLateralTimeConstant) : l0;
    const Pose2 pose = point_at_arclength(line, s, l);
    p.waypoints.push_back(pose.position);
    p.headings.push_back(pose.heading);
  }
  return p;
}

std::vector<AgentState> rollout_lane_tracking(const AgentState& start, const Lane& lane, double accel, int steps,
                                              double dt, const VehicleLimits& limits) {
  std::vector<AgentState> out;
  out.reserve(static_cast<std::size_t>(steps));
  AgentState s = start;
  const Polyline& line = lane.centerline;
  for (int k = 0; k < steps; ++k) {
    const auto proj = project_to_polyline(s.position, line);
    const double s_target = std::min(proj.s + lookahead_distance(s.speed), line.length());
    const Point2 target = point_at_arclength(line, s_target, 0.0).position;
    s = bicycle_step(s, {accel, pure_pursuit_steer(s, target, limits)}, dt, limits);
    out.push_back(s);
  }
  return out;
}

std::vector<PlanCandidate> ReferencePlanner::candidates(const JointState& world, const Scenario& sc) const {
  const std::size_t ego = sc.ego_index();
  const AgentConfig& ego_cfg = sc.agents[ego];
  const AgentState& ego_state = world.states.at(ego);
  const PlannerConfig& cfg = sc.planner;
  const int horizon = cfg.horizon_steps;
  const double dt = sc.sim.dt;

  VehicleLimits limits;
  limits.v_max = std::min(cfg.v_max, sc.sim.v_max);

  std::vector<Prediction> predictions;
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    if (i == ego) continue;
    predictions.push_back(predict_constant_velocity(world.states.at(i), sc.map, horizon, dt));
    predictions.back().agent_index = i;
  }

  const auto& lanes = sc.map.lanes();
  const Lane& current = lanes[sc.map.nearest_lane(ego_state.position).lane_index];
  std::vector<const Lane*> targets;
  for (const Lane& lane : lanes) {
    if (lane.id == current.id || (current.left_neighbor && lane.id == *current.left_neighbor) ||
        (current.right_neighbor && lane.id == *current.right_neighbor)) {
      targets.push_back(&lane);
    }
  }

  std::vector<PlanCandidate> out;
  out.reserve(targets.size() * kAccelGrid.size());
  for (const Lane* lane : targets) {
    for (double accel : kAccelGrid) {
      PlanCandidate c;
      c.target_lane = lane->id;
      c.accel = accel;
      c.states = rollout_lane_tracking(ego_state, *lane, accel, horizon, dt, limits);
      c.min_clearance = std::numeric_limits<double>::infinity();
      for (const Prediction& pred : predictions) {
        const AgentConfig& other = sc.agents[pred.agent_index];
        for (int k = 0; k < horizon; ++k) {
          const auto ku = static_cast<std::size_t>(k);
          c.min_clearance = std::min(c.min_clearance, euclidean_distance(c.states[ku].position, pred.waypoints[ku]));
          if (!c.footprint_conflict) {
            const AgentState predicted{pred.waypoints[ku], pred.headings[ku], 0.0};
            c.footprint_conflict = boxes_overlap(footprint(ego_cfg, c.states[ku], cfg.footprint_margin),
                                                 footprint(other, predicted, cfg.footprint_margin));
          }
        }
      }
      c.feasible = c.min_clearance >= cfg.d_safe && !c.footprint_conflict;
      c.cost = euclidean_distance(c.states.back().position, sc.ego_goal) + cfg.comfort_weight * std::abs(accel);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::size_t ReferencePlanner::select(const std::vector<PlanCandidate>& cands) {
  std::size_t best = cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].feasible && (best == cands.size() || cands[i].cost < cands[best].cost)) best = i;
  }
  if (best != cands.size()) return best;
  best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].min_clearance > cands[best].min_clearance) best = i;
  }
  return best;
}

std::vector<AgentState> ReferencePlanner::plan(const JointState& world, const Scenario& sc) {
  const auto cands = candidates(world, sc);
  const auto& chosen = cands[select(cands)];
  const auto n = static_cast<std::size_t>(sc.sim.replan_every);
  return {chosen.states.begin(), chosen.states.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace goalprobe
