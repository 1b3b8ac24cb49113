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

#include "goalprobe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace goalprobe {

using nlohmann::json;

std::optional<std::size_t> MapModel::find(const LaneId& id) const {
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    if (lanes_[i].id == id) return i;
  }
  return std::nullopt;
}

const Lane& MapModel::lane(const LaneId& id) const {
  const auto idx = find(id);
  if (!idx) throw std::out_of_range("unknown lane '" + id + "'");
  return lanes_[*idx];
}

LaneProjection MapModel::nearest_lane(Point2 p) const {
  LaneProjection best;
  best.projection.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    const auto proj = project_to_polyline(p, lanes_[i].centerline);
    if (proj.distance < best.projection.distance) best = {i, proj};
  }
  return best;
}

std::size_t Scenario::ego_index() const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].role == AgentRole::kEgo) return i;
  }
  throw std::logic_error("scenario has no ego agent");
}

std::vector<std::size_t> Scenario::simulated_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].role == AgentRole::kSimulated) out.push_back(i);
  }
  return out;
}

std::size_t Scenario::agent_index(const AgentId& id) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return i;
  }
  throw std::out_of_range("unknown agent '" + id + "'");
}

const GoalDomain& Scenario::goal_domain(const AgentId& id) const {
  for (const auto& d : goal_domains) {
    if (d.agent_id == id) return d;
  }
  throw std::out_of_range("no goal domain for agent '" + id + "'");
}

std::pair<double, double> drivable_lateral_range(const MapModel& map, const LaneId& reference_lane) {
  const Lane& ref = map.lane(reference_lane);
  double lo = -0.5 * ref.width;
  double hi = 0.5 * ref.width;
  if (ref.left_neighbor) hi += map.lane(*ref.left_neighbor).width;
  if (ref.right_neighbor) lo -= map.lane(*ref.right_neighbor).width;
  return {lo, hi};
}

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, path, key);
}

int integer(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<int>();
}

int integer_or(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  return integer(obj, path, key);
}

std::string text(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_text(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ConfigError(join(path, key), "expected a string or null");
  return it->get<std::string>();
}

const json& array(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_array()) throw ConfigError(join(path, key), "expected an array");
  return v;
}

Lane parse_lane(const json& j, const std::string& path) {
  Lane lane{text(j, path, "id"), Polyline({{0, 0}, {1, 0}}), 0.0, std::nullopt, std::nullopt};
  const json& verts = array(j, path, "centerline");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const json& v = verts[i];
    const std::string vp = at(join(path, "centerline"), i);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(vp, "expected [x, y]");
    }
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  try {
    lane.centerline = Polyline(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "centerline"), e.what());
  }
  lane.width = number(j, path, "width");
  lane.left_neighbor = optional_text(j, path, "left_neighbor");
  lane.right_neighbor = optional_text(j, path, "right_neighbor");
  return lane;
}

AgentConfig parse_agent(const json& j, const std::string& path) {
  AgentConfig a;
  a.id = text(j, path, "id");
  const std::string role = text(j, path, "role");
  if (role == "ego") {
    a.role = AgentRole::kEgo;
  } else if (role == "simulated") {
    a.role = AgentRole::kSimulated;
  } else {
    throw ConfigError(join(path, "role"), "expected \"ego\" or \"simulated\", got \"" + role + "\"");
  }
  a.initial_state.position = {number(j, path, "x"), number(j, path, "y")};
  a.initial_state.heading = normalize_angle(number(j, path, "heading"));
  a.initial_state.speed = number(j, path, "speed");
  a.length = number(j, path, "length");
  a.width = number(j, path, "width");
  if (j.contains("desired_speed")) a.desired_speed = number(j, path, "desired_speed");
  return a;
}

GoalDomain parse_domain(const json& j, const std::string& path) {
  return GoalDomain{text(j, path, "agent_id"), text(j, path, "lane"),    number(j, path, "s_min"),
                    number(j, path, "s_max"),  number(j, path, "l_min"), number(j, path, "l_max")};
}

}  // namespace

void validate(const Scenario& sc) {
  const auto& lanes = sc.map.lanes();
  if (lanes.empty()) throw ConfigError("map.lanes", "at least one lane is required");
  std::set<LaneId> lane_ids;
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    if (!lane_ids.insert(lanes[i].id).second) throw ConfigError(at("map.lanes", i) + ".id", "duplicate lane id");
    if (!(lanes[i].width > 0.0)) throw ConfigError(at("map.lanes", i) + ".width", "must be > 0");
  }
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    if (lanes[i].left_neighbor && !lane_ids.count(*lanes[i].left_neighbor)) {
      throw ConfigError(at("map.lanes", i) + ".left_neighbor", "unknown lane '" + *lanes[i].left_neighbor + "'");
    }
    if (lanes[i].right_neighbor && !lane_ids.count(*lanes[i].right_neighbor)) {
      throw ConfigError(at("map.lanes", i) + ".right_neighbor", "unknown lane '" + *lanes[i].right_neighbor + "'");
    }
  }

  std::set<AgentId> agent_ids;
  std::size_t egos = 0;
  std::size_t simulated = 0;
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const auto& a = sc.agents[i];
    const std::string p = at("agents", i);
    if (!agent_ids.insert(a.id).second) throw ConfigError(p + ".id", "duplicate agent id");
    if (!(a.length > 0.0)) throw ConfigError(p + ".length", "must be > 0");
    if (!(a.width > 0.0)) throw ConfigError(p + ".width", "must be > 0");
    if (!(a.initial_state.speed >= 0.0)) throw ConfigError(p + ".speed", "must be >= 0");
    if (a.desired_speed && !(*a.desired_speed >= 0.0)) throw ConfigError(p + ".desired_speed", "must be >= 0");
    (a.role == AgentRole::kEgo ? egos : simulated)++;
  }
  if (egos != 1) throw ConfigError("agents", "exactly one ego agent is required, found " + std::to_string(egos));
  if (simulated == 0) throw ConfigError("agents", "at least one simulated agent is required");

  if (!(sc.sim.dt > 0.0)) throw ConfigError("sim.dt", "must be > 0");
  if (sc.sim.horizon_steps < 1) throw ConfigError("sim.horizon_steps", "must be >= 1");
  if (sc.sim.replan_every < 1) throw ConfigError("sim.replan_every", "must be >= 1");
  if (!(sc.sim.v_max > 0.0)) throw ConfigError("sim.v_max", "must be > 0");
  if (!(sc.planner.d_safe >= 0.0)) throw ConfigError("planner.d_safe", "must be >= 0");
  if (!(sc.planner.footprint_margin >= 0.0)) throw ConfigError("planner.footprint_margin", "must be >= 0");
  if (sc.planner.horizon_steps < sc.sim.replan_every) {
    throw ConfigError("planner.horizon_steps", "must be >= sim.replan_every");
  }
  if (!(sc.planner.v_max > 0.0)) throw ConfigError("planner.v_max", "must be > 0");

  std::set<AgentId> covered;
  for (std::size_t i = 0; i < sc.goal_domains.size(); ++i) {
    const auto& d = sc.goal_domains[i];
    const std::string p = at("goal_domains", i);
    const auto owner =
        std::find_if(sc.agents.begin(), sc.agents.end(), [&](const auto& a) { return a.id == d.agent_id; });
    if (owner == sc.agents.end()) throw ConfigError(p + ".agent_id", "unknown agent '" + d.agent_id + "'");
    if (owner->role != AgentRole::kSimulated)
      throw ConfigError(p + ".agent_id", "goal domains belong to simulated agents");
    if (!covered.insert(d.agent_id).second) throw ConfigError(p + ".agent_id", "duplicate goal domain");
    const auto lane_idx = sc.map.find(d.reference_lane);
    if (!lane_idx) throw ConfigError(p + ".lane", "unknown lane '" + d.reference_lane + "'");
    if (!(d.s_min < d.s_max)) throw ConfigError(p + ".s_min", "s_min must be < s_max");
    if (!(d.l_min <= d.l_max)) throw ConfigError(p + ".l_min", "l_min must be <= l_max");
    const Lane& lane = lanes[*lane_idx];
    if (d.s_min < 0.0 || d.s_max > lane.centerline.length()) {
      throw ConfigError(p + ".s_max", "s range must lie within the reference lane [0, " +
                                          std::to_string(lane.centerline.length()) + "]");
    }
    const auto [lo, hi] = drivable_lateral_range(sc.map, d.reference_lane);
    if (d.l_min < lo - 1e-9 || d.l_max > hi + 1e-9) {
      throw ConfigError(p + ".l_min", "l range must lie within the drivable width [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
    }
    const double agent_s = project_to_polyline(owner->initial_state.position, lane.centerline).s;
    if (d.s_min < agent_s) {
      throw ConfigError(p + ".s_min", "goal domain lies behind its agent (agent at s=" + std::to_string(agent_s) + ")");
    }
  }
  // Domains must follow agent order so joint prompts line up.
  std::size_t k = 0;
  for (const auto& a : sc.agents) {
    if (a.role != AgentRole::kSimulated) continue;
    if (!covered.count(a.id))
      throw ConfigError("goal_domains", "missing goal domain for simulated agent '" + a.id + "'");
    if (sc.goal_domains[k].agent_id != a.id)
      throw ConfigError(at("goal_domains", k), "goal domains must follow agent order");
    ++k;
  }
}

Scenario load_scenario(const std::string& config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected an object");

  Scenario sc;
  sc.id = doc.contains("id") ? text(doc, "", "id") : std::string("scenario");

  const json& map = member(doc, "", "map");
  const json& lanes = array(map, "map", "lanes");
  std::vector<Lane> parsed;
  for (std::size_t i = 0; i < lanes.size(); ++i) parsed.push_back(parse_lane(lanes[i], at("map.lanes", i)));
  sc.map = MapModel(std::move(parsed));

  const json& agents = array(doc, "", "agents");
  for (std::size_t i = 0; i < agents.size(); ++i) sc.agents.push_back(parse_agent(agents[i], at("agents", i)));

  const json& goal = member(doc, "", "ego_goal");
  sc.ego_goal = {number(goal, "ego_goal", "x"), number(goal, "ego_goal", "y")};

  const json& domains = array(doc, "", "goal_domains");
  for (std::size_t i = 0; i < domains.size(); ++i) {
    sc.goal_domains.push_back(parse_domain(domains[i], at("goal_domains", i)));
  }
  // Accept domains in any order; store them in agent order.
  std::stable_sort(sc.goal_domains.begin(), sc.goal_domains.end(), [&](const GoalDomain& a, const GoalDomain& b) {
    const auto rank = [&](const AgentId& id) {
      for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        if (sc.agents[i].id == id) return i;
      }
      return sc.agents.size();
    };
    return rank(a.agent_id) < rank(b.agent_id);
  });

  const json& sim = member(doc, "", "sim");
  sc.sim.dt = number(sim, "sim", "dt");
  sc.sim.horizon_steps = integer(sim, "sim", "horizon_steps");
  sc.sim.replan_every = integer(sim, "sim", "replan_every");
  sc.sim.v_max = number_or(sim, "sim", "v_max", sc.sim.v_max);

  if (doc.contains("planner")) {
    const json& pl = doc["planner"];
    sc.planner.d_safe = number_or(pl, "planner", "d_safe", sc.planner.d_safe);
    sc.planner.footprint_margin = number_or(pl, "planner", "footprint_margin", sc.planner.footprint_margin);
    sc.planner.horizon_steps = integer_or(pl, "planner", "horizon_steps", sc.planner.horizon_steps);
    sc.planner.comfort_weight = number_or(pl, "planner", "comfort_weight", sc.planner.comfort_weight);
    sc.planner.v_max = number_or(pl, "planner", "v_max", sc.planner.v_max);
  }

  validate(sc);
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["id"] = sc.id;
  json lanes = json::array();
  for (const auto& lane : sc.map.lanes()) {
    json verts = json::array();
    for (const auto& v : lane.centerline.vertices()) verts.push_back({v.x, v.y});
    json l = {{"id", lane.id}, {"centerline", verts}, {"width", lane.width}};
    l["left_neighbor"] = lane.left_neighbor ? json(*lane.left_neighbor) : json(nullptr);
    l["right_neighbor"] = lane.right_neighbor ? json(*lane.right_neighbor) : json(nullptr);
    lanes.push_back(std::move(l));
  }
  doc["map"] = {{"lanes", lanes}};
  json agents = json::array();
  for (const auto& a : sc.agents) {
    json j = {{"id", a.id},
              {"role", a.role == AgentRole::kEgo ? "ego" : "simulated"},
              {"x", a.initial_state.position.x},
              {"y", a.initial_state.position.y},
              {"heading", a.initial_state.heading},
              {"speed", a.initial_state.speed},
              {"length", a.length},
              {"width", a.width}};
    if (a.desired_speed) j["desired_speed"] = *a.desired_speed;
    agents.push_back(std::move(j));
  }
  doc["agents"] = agents;
  doc["ego_goal"] = {{"x", sc.ego_goal.x}, {"y", sc.ego_goal.y}};
  json domains = json::array();
  for (const auto& d : sc.goal_domains) {
    domains.push_back({{"agent_id", d.agent_id},
                       {"lane", d.reference_lane},
                       {"s_min", d.s_min},
                       {"s_max", d.s_max},
                       {"l_min", d.l_min},
                       {"l_max", d.l_max}});
  }
  doc["goal_domains"] = domains;
  doc["sim"] = {{"dt", sc.sim.dt},
                {"horizon_steps", sc.sim.horizon_steps},
                {"replan_every", sc.sim.replan_every},
                {"v_max", sc.sim.v_max}};
  doc["planner"] = {{"d_safe", sc.planner.d_safe},
                    {"footprint_margin", sc.planner.footprint_margin},
                    {"horizon_steps", sc.planner.horizon_steps},
                    {"comfort_weight", sc.planner.comfort_weight},
                    {"v_max", sc.planner.v_max}};
  return doc.dump(2) + "\n";
}

Point2 prompt_to_world(const GoalDomain& domain, std::span<const double> u, const MapModel& map) {
  if (u.size() != 2) throw std::invalid_argument("goal prompt must be 2-dimensional");
  const double s = domain.s_min + u[0] * (domain.s_max - domain.s_min);
  const double l = domain.l_min + u[1] * (domain.l_max - domain.l_min);
  const Lane& lane = map.lane(domain.reference_lane);
  return point_at_arclength(lane.centerline, std::clamp(s, 0.0, lane.centerline.length()), l).position;
}

std::vector<Point2> prompts_to_goals(const Scenario& sc, std::span<const double> u) {
  if (u.size() != sc.prompt_dim()) {
    throw std::invalid_argument("joint prompt has " + std::to_string(u.size()) + " coordinates, expected " +
                                std::to_string(sc.prompt_dim()));
  }
  std::vector<Point2> goals;
  for (std::size_t k = 0; k < sc.goal_domains.size(); ++k) {
    goals.push_back(prompt_to_world(sc.goal_domains[k], u.subspan(2 * k, 2), sc.map));
  }
  return goals;
}

}  // namespace goalprobe
