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

#include "goalprobe/records.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace goalprobe {

using nlohmann::json;

namespace {

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_number(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw RecordParseError(line, std::string("field '") + key + "' missing or not a number");
  }
  return it->get<double>();
}

const json& get_field(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end()) throw RecordParseError(line, std::string("field '") + key + "' missing");
  return *it;
}

json parse_line(const std::string& text, std::size_t line) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw RecordParseError(line, "expected a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw RecordParseError(line, e.what());
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return json(value).dump();
}

void write_episode_jsonl(std::ostream& out, const Episode& ep) {
  json header;
  header["type"] = "episode";
  header["scenario_id"] = ep.scenario_id;
  header["dt"] = ep.dt;
  header["ego"] = ep.agent_ids.at(ep.ego_index);
  json agents = json::array();
  for (std::size_t i = 0; i < ep.agent_ids.size(); ++i) {
    agents.push_back({{"id", ep.agent_ids[i]}, {"length", ep.lengths[i]}, {"width", ep.widths[i]}});
  }
  header["agents"] = agents;
  json goals = json::array();
  for (std::size_t k = 0; k < ep.goals.size(); ++k) {
    goals.push_back({{"agent", ep.goal_agents.at(k)}, {"x", ep.goals[k].x}, {"y", ep.goals[k].y}});
  }
  header["goals"] = goals;
  header["collided"] = ep.collision.has_value();
  header["collision"] = ep.collision
                            ? json{{"t", ep.collision->timestep},
                                   {"agents", {ep.agent_ids[ep.collision->first], ep.agent_ids[ep.collision->second]}}}
                            : json(nullptr);
  header["failed"] = ep.failed;
  header["failure"] = ep.failure;
  header["steps"] = ep.trace.size();
  out << header.dump() << '\n';

  for (const auto& js : ep.trace) {
    json step;
    step["t"] = js.timestep;
    json states = json::object();
    for (std::size_t i = 0; i < js.states.size(); ++i) {
      const auto& s = js.states[i];
      states[ep.agent_ids[i]] = {{"x", s.position.x}, {"y", s.position.y}, {"heading", s.heading}, {"speed", s.speed}};
    }
    step["agents"] = std::move(states);
    out << step.dump() << '\n';
  }
}

Episode read_episode_jsonl(std::istream& in) {
  Episode ep;
  std::string text;
  std::size_t line = 0;
  std::size_t expected_steps = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json j = parse_line(text, line);
    try {
      if (!have_header) {
        if (j.value("type", "") != "episode") throw RecordParseError(line, "expected an episode header record");
        ep.scenario_id = get_field(j, "scenario_id", line).get<std::string>();
        ep.dt = get_number(j, "dt", line);
        const std::string ego = get_field(j, "ego", line).get<std::string>();
        const json& agents = get_field(j, "agents", line);
        if (!agents.is_array() || agents.empty()) throw RecordParseError(line, "'agents' must be a nonempty array");
        bool ego_found = false;
        for (const auto& a : agents) {
          ep.agent_ids.push_back(get_field(a, "id", line).get<std::string>());
          ep.lengths.push_back(get_number(a, "length", line));
          ep.widths.push_back(get_number(a, "width", line));
          if (ep.agent_ids.back() == ego) {
            ep.ego_index = ep.agent_ids.size() - 1;
            ego_found = true;
          }
        }
        if (!ego_found) throw RecordParseError(line, "ego '" + ego + "' is not listed in 'agents'");
        for (const auto& g : get_field(j, "goals", line)) {
          ep.goal_agents.push_back(get_field(g, "agent", line).get<std::string>());
          ep.goals.push_back({get_number(g, "x", line), get_number(g, "y", line)});
        }
        const json& col = get_field(j, "collision", line);
        if (!col.is_null()) {
          const json& pair = get_field(col, "agents", line);
          const auto index_of = [&](const std::string& id) {
            for (std::size_t i = 0; i < ep.agent_ids.size(); ++i) {
              if (ep.agent_ids[i] == id) return i;
            }
            throw RecordParseError(line, "collision names unknown agent '" + id + "'");
          };
          ep.collision = Collision{static_cast<int>(get_number(col, "t", line)),
                                   index_of(pair.at(0).get<std::string>()), index_of(pair.at(1).get<std::string>())};
        }
        ep.failed = get_field(j, "failed", line).get<bool>();
        ep.failure = j.value("failure", "");
        expected_steps = static_cast<std::size_t>(get_number(j, "steps", line));
        have_header = true;
        continue;
      }
      JointState js;
      js.timestep = static_cast<int>(get_number(j, "t", line));
      if (js.timestep != static_cast<int>(ep.trace.size())) {
        throw RecordParseError(line, "timestep " + std::to_string(js.timestep) + " out of sequence");
      }
      const json& agents = get_field(j, "agents", line);
      for (const auto& id : ep.agent_ids) {
        const auto it = agents.find(id);
        if (it == agents.end()) throw RecordParseError(line, "missing state for agent '" + id + "'");
        js.states.push_back({{get_number(*it, "x", line), get_number(*it, "y", line)},
                             get_number(*it, "heading", line),
                             get_number(*it, "speed", line)});
      }
      ep.trace.push_back(std::move(js));
    } catch (const json::exception& e) {
      throw RecordParseError(line, e.what());
    }
  }
  if (!have_header) throw RecordParseError(line + 1, "empty episode file");
  if (ep.trace.size() != expected_steps) {
    throw RecordParseError(line + 1, "episode truncated: header promises " + std::to_string(expected_steps) +
                                         " steps, found " + std::to_string(ep.trace.size()));
  }
  return ep;
}

Episode read_episode_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open episode file '" + path + "'");
  return read_episode_jsonl(in);
}

CampaignLogEntry log_entry(const EpisodeRecord& r) {
  CampaignLogEntry e;
  e.iter = r.iter;
  e.u = r.u;
  e.goal_world = r.goals;
  e.failed = r.failed();
  e.error = r.error;
  e.episode_file = r.episode_file;
  if (r.metrics) {
    e.score = r.objective;
    e.collided = r.metrics->collided;
    e.min_dist = r.metrics->min_dist;
    e.ttc_min = r.metrics->ttc_min;
  } else {
    e.collided = r.episode.collision.has_value();
    e.ttc_min = std::numeric_limits<double>::infinity();
  }
  return e;
}

void write_campaign_jsonl(std::ostream& out, const CampaignResult& result) {
  for (const auto& rec : result.records) {
    const CampaignLogEntry e = log_entry(rec);
    json goal = json::array();
    for (const auto& g : e.goal_world) {
      goal.push_back(g.x);
      goal.push_back(g.y);
    }
    json j;
    j["iter"] = e.iter;
    j["u"] = e.u;
    j["goal_world"] = goal;
    j["score"] = e.score ? json(*e.score) : json(nullptr);
    j["collided"] = e.collided;
    j["min_dist"] = e.min_dist ? json(*e.min_dist) : json(nullptr);
    j["ttc_min"] = nullable(e.ttc_min);
    j["episode_file"] = e.episode_file;
    j["failed"] = e.failed;
    if (!e.error.empty()) j["error"] = e.error;
    out << j.dump() << '\n';
  }
}

std::vector<CampaignLogEntry> read_campaign_jsonl(std::istream& in) {
  std::vector<CampaignLogEntry> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json j = parse_line(text, line);
    CampaignLogEntry e;
    try {
      e.iter = static_cast<int>(get_number(j, "iter", line));
      const json& u = get_field(j, "u", line);
      if (!u.is_array()) throw RecordParseError(line, "'u' must be an array");
      for (const auto& v : u) e.u.push_back(v.get<double>());
      const json& g = get_field(j, "goal_world", line);
      for (std::size_t k = 0; k + 1 < g.size(); k += 2)
        e.goal_world.push_back({g[k].get<double>(), g[k + 1].get<double>()});
      const json& score = get_field(j, "score", line);
      if (!score.is_null()) e.score = score.get<double>();
      e.collided = get_field(j, "collided", line).get<bool>();
      const json& md = get_field(j, "min_dist", line);
      if (!md.is_null()) e.min_dist = md.get<double>();
      const json& ttc = get_field(j, "ttc_min", line);
      e.ttc_min = ttc.is_null() ? std::numeric_limits<double>::infinity() : ttc.get<double>();
      e.episode_file = get_field(j, "episode_file", line).get<std::string>();
      e.failed = j.value("failed", !e.score.has_value());
      e.error = j.value("error", "");
    } catch (const json::exception& ex) {
      throw RecordParseError(line, ex.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_stats_csv_row(std::ostream& out, const std::string& scenario, const std::string& sampler,
                         const CampaignStats& st, std::uint64_t seed) {
  out << scenario << ',' << sampler << ',' << st.n << ',' << format_number(st.coll_pct) << ','
      << format_number(st.min_dist.mean) << ',' << format_number(st.min_dist.std) << ',' << format_number(st.ttc.mean)
      << ',' << format_number(st.ttc.std) << ',' << st.ttc_inf_count << ',' << format_number(st.ego_asd) << ','
      << format_number(st.agent_asd) << ',' << seed << '\n';
}

}  // namespace goalprobe
