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

#ifndef GOALPROBE_RECORDS_HPP_
#define GOALPROBE_RECORDS_HPP_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalprobe/campaign.hpp"
#include "goalprobe/metrics.hpp"
#include "goalprobe/sim.hpp"

namespace goalprobe {

/// JSON Lines parse failure; `line()` is 1-based.
class RecordParseError : public std::runtime_error {
 public:
  RecordParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Episode file: a header record, then one record per timestep
// {"t": k, "agents": {id: {x, y, heading, speed}}}.
void write_episode_jsonl(std::ostream& out, const Episode& episode);
Episode read_episode_jsonl(std::istream& in);
Episode read_episode_file(const std::string& path);

/// One line of campaign.jsonl.
struct CampaignLogEntry {
  int iter = 0;
  Prompt u;
  std::vector<Point2> goal_world;
  std::optional<double> score;  // null for failed episodes
  bool collided = false;
  std::optional<double> min_dist;
  double ttc_min = 0.0;  // +inf is stored as null
  std::string episode_file;
  bool failed = false;
  std::string error;
};

CampaignLogEntry log_entry(const EpisodeRecord& record);
void write_campaign_jsonl(std::ostream& out, const CampaignResult& result);
std::vector<CampaignLogEntry> read_campaign_jsonl(std::istream& in);

inline constexpr const char* kStatsCsvHeader =
    "scenario,sampler,n,coll_pct,min_dist_mean,min_dist_std,ttc_mean,ttc_std,ttc_inf_count,ego_asd,agent_asd,seed";

void write_stats_csv_row(std::ostream& out, const std::string& scenario, const std::string& sampler,
                         const CampaignStats& stats, std::uint64_t seed);

/// Shortest round-trip text for doubles; "inf"/"nan" spelled out.
std::string format_number(double value);

}  // namespace goalprobe

#endif  // GOALPROBE_RECORDS_HPP_
