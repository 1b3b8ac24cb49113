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

// Shared fixtures for the unit tests: preset loading, hand-built episodes,
// and a scratch directory that cleans up after itself.

#ifndef GOALPROBE_TESTS_SUPPORT_HPP_
#define GOALPROBE_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "goalprobe/scenario.hpp"
#include "goalprobe/sim.hpp"

namespace goalprobe::testing {

inline std::string preset_path(const std::string& name) { return std::string(GOALPROBE_PRESET_DIR) + "/" + name; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline Scenario preset(const std::string& id) { return load_scenario_file(preset_path(id + ".scn")); }

/// Two straight lanes along +x ("left" at y = 0, "right" at y = -3.5), the ego
/// at the origin and one simulated agent "car" 30 m ahead in the left lane.
inline nlohmann::json two_lane_doc() {
  return nlohmann::json::parse(R"({
    "id": "two_lane",
    "map": {"lanes": [
      {"id": "left", "centerline": [[-100, 0], [500, 0]], "width": 3.5, "right_neighbor": "right"},
      {"id": "right", "centerline": [[-100, -3.5], [500, -3.5]], "width": 3.5, "left_neighbor": "left"}
    ]},
    "agents": [
      {"id": "ego", "role": "ego", "x": 0, "y": 0, "heading": 0, "speed": 10, "length": 4.5, "width": 1.8},
      {"id": "car", "role": "simulated", "x": 30, "y": 0, "heading": 0, "speed": 10, "length": 4.5, "width": 1.8}
    ],
    "ego_goal": {"x": 300, "y": -3.5},
    "goal_domains": [
      {"agent_id": "car", "lane": "left", "s_min": 150, "s_max": 300, "l_min": -5.25, "l_max": 1.75}
    ],
    "sim": {"dt": 0.1, "horizon_steps": 60, "replan_every": 5}
  })");
}

inline Scenario scenario_from(const nlohmann::json& doc) { return load_scenario(doc.dump()); }

/// Episode with the given per-agent position tracks; agent 0 is the ego.
/// Headings point along +x and speeds are left at zero.
inline Episode make_episode(const std::vector<std::vector<Point2>>& tracks, double dt = 0.1, double length = 4.5,
                            double width = 1.8) {
  Episode ep;
  ep.scenario_id = "synthetic";
  ep.dt = dt;
  ep.ego_index = 0;
  for (std::size_t a = 0; a < tracks.size(); ++a) {
    ep.agent_ids.push_back(a == 0 ? "ego" : "a" + std::to_string(a));
    ep.lengths.push_back(length);
    ep.widths.push_back(width);
    if (a > 0) {
      ep.goal_agents.push_back(ep.agent_ids.back());
      ep.goals.push_back(tracks[a].back());
    }
  }
  for (std::size_t t = 0; t < tracks.front().size(); ++t) {
    JointState js;
    js.timestep = static_cast<int>(t);
    for (const auto& tr : tracks) js.states.push_back({tr[t], 0.0, 0.0});
    ep.trace.push_back(js);
  }
  return ep;
}

/// Random walk tracks for `agents` agents over `steps` states.
inline std::vector<std::vector<Point2>> random_tracks(std::mt19937_64& rng, std::size_t agents, std::size_t steps) {
  std::uniform_real_distribution<double> start(-30.0, 30.0);
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<std::vector<Point2>> tracks(agents);
  for (auto& tr : tracks) {
    Point2 p{start(rng), start(rng)};
    for (std::size_t t = 0; t < steps; ++t) {
      tr.push_back(p);
      p = p + Point2{1.0 + step(rng), step(rng)};
    }
  }
  return tracks;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("goalprobe-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace goalprobe::testing

#endif  // GOALPROBE_TESTS_SUPPORT_HPP_
