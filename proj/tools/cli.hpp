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

#ifndef GOALPROBE_TOOLS_CLI_HPP_
#define GOALPROBE_TOOLS_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace goalprobe::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,    // bad flags, bad config, unusable input
  kRuntime = 3,  // the run itself could not complete
};

struct RunOptions {
  std::string scenario_file;
  std::string sampler = "bo";
  int budget = 75;
  unsigned long long seed = 0;
  std::string out_dir;  // empty: derived from GOALPROBE_OUT or ./runs
  int jobs = 1;
  std::optional<double> dt;
  std::optional<int> horizon;
  std::optional<int> replan_every;
  std::optional<double> beta;
  std::optional<double> d_safe;
  int candidates = 1024;
  double nu = 2.5;
  std::string asd_convention = "paper";
  std::string planner_cmd;  // empty: built-in reference planner
};

struct ReportOptions {
  std::vector<std::string> campaign_dirs;
  std::string csv_path;  // "-" for stdout
};

struct ExportGpOptions {
  std::string campaign_dir;
  int resolution = 64;
  std::string out_dir;  // defaults to the campaign directory
};

struct ReplayOptions {
  std::string episode_file;
  bool summary_only = false;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);
int cmd_export_gp(const ExportGpOptions& opts, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayOptions& opts, std::ostream& out, std::ostream& err);
/// Serves the reference planner for `scenario_file` over the line protocol.
int cmd_plan_stdio(const std::string& scenario_file, std::istream& in, std::ostream& out, std::ostream& err);

/// Output directory `run` uses when --out is not given.
std::string default_out_dir(const std::string& scenario_id, const std::string& sampler, unsigned long long seed);

/// Full command line, argv[0] included.
int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace goalprobe::cli

#endif  // GOALPROBE_TOOLS_CLI_HPP_
