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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "goalprobe/campaign.hpp"
#include "goalprobe/external_planner.hpp"
#include "goalprobe/metrics.hpp"
#include "goalprobe/records.hpp"
#include "goalprobe/version.hpp"

namespace goalprobe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kCampaignFile = "campaign.jsonl";
constexpr const char* kStatsFile = "stats.csv";

std::string episode_name(int iter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "episodes/%04d.jsonl", iter);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

json manifest_json(const RunOptions& o, const Scenario& sc, const SamplerConfig& cfg, const std::string& out_dir) {
  json overrides = json::object();
  if (o.dt) overrides["dt"] = *o.dt;
  if (o.horizon) overrides["horizon"] = *o.horizon;
  if (o.replan_every) overrides["replan_every"] = *o.replan_every;
  if (o.d_safe) overrides["d_safe"] = *o.d_safe;
  json m;
  m["tool"] = "goalprobe";
  m["version"] = kVersion;
  m["scenario_file"] = o.scenario_file;
  m["scenario_id"] = sc.id;
  m["seed"] = cfg.seed;
  m["output_dir"] = out_dir;
  m["sampler"] = {{"kind", sampler_kind_name(cfg.kind)},
                  {"budget", cfg.budget},
                  {"beta", cfg.beta},
                  {"candidates", cfg.candidates},
                  {"perturbation", cfg.perturbation},
                  {"nu", matern_nu_value(cfg.gp.nu)},
                  {"dim", sc.prompt_dim()}};
  m["overrides"] = overrides;
  m["planner"] = o.planner_cmd.empty() ? json("reference") : json{{"command", o.planner_cmd}};
  m["metrics"] = {{"ttc_definition", kTtcDefinition}, {"asd_convention", o.asd_convention}};
  // Resolved scenario, so a run can be reproduced without the original file.
  m["scenario"] = json::parse(serialize_scenario(sc));
  return m;
}

json read_manifest(const fs::path& dir) {
  std::ifstream f(dir / kManifestFile);
  if (!f) throw std::runtime_error("no manifest in '" + dir.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt manifest in '" + dir.string() + "': " + e.what());
  }
}

std::vector<CampaignLogEntry> read_log(const fs::path& dir) {
  std::ifstream f(dir / kCampaignFile);
  if (!f) throw std::runtime_error("no campaign log in '" + dir.string() + "'");
  try {
    return read_campaign_jsonl(f);
  } catch (const RecordParseError& e) {
    throw std::runtime_error((dir / kCampaignFile).string() + ": " + e.what());
  }
}

// Episodes behind a campaign log, skipping entries that never produced one.
std::vector<Episode> load_episodes(const fs::path& dir, const std::vector<CampaignLogEntry>& log) {
  std::vector<Episode> eps;
  for (const auto& e : log) {
    if (e.episode_file.empty()) continue;
    const fs::path p = dir / e.episode_file;
    try {
      eps.push_back(read_episode_file(p.string()));
    } catch (const RecordParseError& ex) {
      throw std::runtime_error(p.string() + ": " + ex.what());
    }
  }
  return eps;
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return format_number(v);
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::string default_out_dir(const std::string& scenario_id, const std::string& sampler, unsigned long long seed) {
  const char* root = std::getenv("GOALPROBE_OUT");
  const fs::path base = (root && *root) ? fs::path(root) : fs::path("runs");
  return (base / (scenario_id + "-" + sampler + "-s" + std::to_string(seed))).string();
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  Scenario sc;
  SamplerConfig cfg;
  AsdConvention convention{};
  try {
    sc = load_scenario_file(o.scenario_file);
    if (o.dt) sc.sim.dt = *o.dt;
    if (o.horizon) sc.sim.horizon_steps = *o.horizon;
    if (o.replan_every) sc.sim.replan_every = *o.replan_every;
    if (o.d_safe) sc.planner.d_safe = *o.d_safe;
    validate(sc);

    cfg.kind = sampler_kind_from(o.sampler);
    cfg.budget = o.budget;
    if (o.beta) cfg.beta = *o.beta;
    cfg.candidates = o.candidates;
    cfg.seed = o.seed;
    cfg.dim = static_cast<unsigned>(sc.prompt_dim());
    cfg.gp.nu = matern_nu_from(o.nu);
    validate(cfg);
    convention = asd_convention_from(o.asd_convention);
    if (o.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string dir = o.out_dir.empty() ? default_out_dir(sc.id, sampler_kind_name(cfg.kind), cfg.seed) : o.out_dir;
  try {
    fs::create_directories(fs::path(dir) / "episodes");
    write_text(fs::path(dir) / kManifestFile, manifest_json(o, sc, cfg, dir).dump(2) + "\n");

    PlannerFactory factory = [&o]() -> std::unique_ptr<Planner> {
      if (o.planner_cmd.empty()) return std::make_unique<ReferencePlanner>();
      return std::make_unique<ProcessPlanner>(o.planner_cmd);
    };
    ReactivePolicyProvider engine;
    CampaignResult result = run_campaign(sc, cfg, engine, factory, criticality_score, o.jobs);

    std::size_t failures = 0;
    for (auto& rec : result.records) {
      if (rec.failed()) {
        ++failures;
        err << "episode " << rec.iter << " failed: " << rec.error << '\n';
      }
      if (rec.episode.trace.empty()) continue;
      rec.episode_file = episode_name(rec.iter);
      std::ostringstream s;
      write_episode_jsonl(s, rec.episode);
      write_text(fs::path(dir) / rec.episode_file, s.str());
    }

    std::ostringstream log;
    write_campaign_jsonl(log, result);
    write_text(fs::path(dir) / kCampaignFile, log.str());

    const auto eps = result.episodes();
    std::ostringstream csv;
    csv << kStatsCsvHeader << '\n';
    out << sc.id << ' ' << sampler_kind_name(cfg.kind) << ": " << result.records.size() << " episodes, " << failures
        << " failed";
    try {
      const CampaignStats st = campaign_stats(eps, convention);
      write_stats_csv_row(csv, sc.id, sampler_kind_name(cfg.kind), st, cfg.seed);
      out << ", coll " << fixed(st.coll_pct, 1) << "%, min dist " << fixed(st.min_dist.mean, 3) << " m";
    } catch (const std::invalid_argument& e) {
      // Too few successful episodes; the campaign itself still completed.
      err << "warning: no statistics: " << e.what() << '\n';
    }
    write_text(fs::path(dir) / kStatsFile, csv.str());
    out << " -> " << dir << '\n';
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
  if (o.campaign_dirs.empty()) {
    err << "report: no campaign directories given\n";
    return kUsage;
  }
  struct Row {
    std::string scenario;
    std::string sampler;
    std::uint64_t seed = 0;
    CampaignStats stats;
  };
  std::vector<Row> rows;
  for (const auto& d : o.campaign_dirs) {
    try {
      const json m = read_manifest(d);
      const auto log = read_log(d);
      const auto eps = load_episodes(d, log);
      const auto conv = asd_convention_from(m.at("metrics").at("asd_convention").get<std::string>());
      rows.push_back({m.at("scenario_id").get<std::string>(), m.at("sampler").at("kind").get<std::string>(),
                      m.at("seed").get<std::uint64_t>(), campaign_stats(eps, conv)});
    } catch (const std::exception& e) {
      err << "warning: skipping '" << d << "': " << e.what() << '\n';
    }
  }
  if (rows.empty()) {
    err << "report: no readable campaigns\n";
    return kUsage;
  }
  // Group by scenario in first-seen order; BO ahead of the baseline within a group.
  std::map<std::string, std::size_t> first_seen;
  for (const auto& r : rows) first_seen.emplace(r.scenario, first_seen.size());
  std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    if (a.scenario != b.scenario) return first_seen[a.scenario] < first_seen[b.scenario];
    return (a.sampler == "bo") > (b.sampler == "bo");
  });

  const auto pm = [](const MeanStd& v) { return fixed(v.mean, 2) + " +/- " + fixed(v.std, 2); };
  out << std::left << std::setw(14) << "scenario" << std::setw(8) << "sampler" << std::setw(6) << "seed" << std::setw(5)
      << "n" << std::setw(8) << "coll%" << std::setw(18) << "min_dist[m]" << std::setw(22) << "ttc[s] (inf)"
      << std::setw(10) << "ego_asd"
      << "agent_asd\n";
  std::string last;
  for (const auto& r : rows) {
    if (!last.empty() && r.scenario != last) out << '\n';
    last = r.scenario;
    const std::string ttc = pm(r.stats.ttc) + " (" + std::to_string(r.stats.ttc_inf_count) + ")";
    out << std::left << std::setw(14) << r.scenario << std::setw(8) << r.sampler << std::setw(6) << r.seed
        << std::setw(5) << r.stats.n << std::setw(8) << fixed(r.stats.coll_pct, 1) << std::setw(18)
        << pm(r.stats.min_dist) << std::setw(22) << ttc << std::setw(10) << fixed(r.stats.ego_asd, 3)
        << fixed(r.stats.agent_asd, 3) << '\n';
  }

  if (!o.csv_path.empty()) {
    std::ostringstream csv;
    csv << kStatsCsvHeader << '\n';
    for (const auto& r : rows) write_stats_csv_row(csv, r.scenario, r.sampler, r.stats, r.seed);
    if (o.csv_path == "-") {
      out << '\n' << csv.str();
    } else {
      try {
        write_text(o.csv_path, csv.str());
      } catch (const std::exception& e) {
        err << "report: " << e.what() << '\n';
        return kRuntime;
      }
    }
  }
  return kOk;
}

int cmd_export_gp(const ExportGpOptions& o, std::ostream& out, std::ostream& err) {
  if (o.resolution < 2) {
    err << "export-gp: resolution must be at least 2\n";
    return kUsage;
  }
  json m;
  std::vector<CampaignLogEntry> log;
  try {
    m = read_manifest(o.campaign_dir);
    log = read_log(o.campaign_dir);
  } catch (const std::exception& e) {
    err << "export-gp: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<Observation> history;
  for (const auto& e : log) {
    if (e.score) history.push_back({e.u, *e.score, static_cast<std::size_t>(e.iter)});
  }
  if (history.size() < 2) {
    err << "export-gp: need at least 2 successful episodes, found " << history.size() << '\n';
    return kUsage;
  }
  if (history.front().prompt.size() != 2) {
    err << "export-gp: grid export needs a 2-D prompt space, campaign has " << history.front().prompt.size() << '\n';
    return kUsage;
  }

  SamplerConfig cfg;
  cfg.dim = 2;
  try {
    cfg.gp.nu = matern_nu_from(m.at("sampler").at("nu").get<double>());
  } catch (const std::exception& e) {
    err << "export-gp: corrupt manifest: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto model = fit_surrogate(history, cfg);
    const fs::path dir = o.out_dir.empty() ? fs::path(o.campaign_dir) : fs::path(o.out_dir);
    fs::create_directories(dir);

    std::ostringstream grid;
    write_grid_csv(grid, posterior_grid(*model, o.resolution));
    write_text(dir / "gp_grid.csv", grid.str());

    std::ostringstream samples;
    samples << "u1,u2,score\n";
    for (const auto& h : history) {
      samples << format_number(h.prompt[0]) << ',' << format_number(h.prompt[1]) << ',' << format_number(h.score)
              << '\n';
    }
    write_text(dir / "gp_samples.csv", samples.str());
    out << "wrote " << (dir / "gp_grid.csv").string() << " (" << o.resolution * o.resolution << " cells) and "
        << (dir / "gp_samples.csv").string() << " (" << history.size() << " points)\n";
  } catch (const std::exception& e) {
    err << "export-gp: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  Episode ep;
  try {
    ep = read_episode_file(o.episode_file);
  } catch (const RecordParseError& e) {
    err << o.episode_file << ": parse error at " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "replay: " << e.what() << '\n';
    return kUsage;
  }

  out << "episode " << ep.scenario_id << ", " << ep.trace.size() << " states, dt " << format_number(ep.dt) << '\n';
  if (!o.summary_only) {
    for (const auto& js : ep.trace) {
      out << "t=" << js.timestep;
      for (std::size_t i = 0; i < js.states.size(); ++i) {
        const auto& s = js.states[i];
        out << "  " << ep.agent_ids[i] << " (" << fixed(s.position.x, 3) << ", " << fixed(s.position.y, 3) << ") h "
            << fixed(s.heading, 4) << " v " << fixed(s.speed, 3);
      }
      out << '\n';
    }
  }

  if (ep.collision) {
    out << "collision: t=" << ep.collision->timestep << " between " << ep.agent_ids[ep.collision->first] << " and "
        << ep.agent_ids[ep.collision->second] << '\n';
  } else {
    out << "collision: none\n";
  }
  if (ep.failed) out << "failed: " << ep.failure << '\n';

  try {
    const CriticalPoint cp = closest_approach(ep);
    const EpisodeScore sc = score_episode(ep);
    out << "closest approach: t=" << cp.timestep << " agent " << ep.agent_ids[cp.agent] << " distance "
        << format_number(cp.distance) << '\n';
    out << "score " << format_number(sc.g) << " min_dist " << format_number(sc.min_dist) << " ttc_min "
        << format_number(sc.ttc_min) << " collided " << (sc.collided ? "true" : "false") << '\n';
  } catch (const std::invalid_argument& e) {
    out << "metrics: unavailable (" << e.what() << ")\n";
  }
  return kOk;
}

int cmd_plan_stdio(const std::string& scenario_file, std::istream& in, std::ostream& out, std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario_file(scenario_file);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    ReferencePlanner planner;
    serve_planner_stdio(in, out, sc, planner);
  } catch (const std::exception& e) {
    err << "plan-stdio: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goal-prompt stress testing for motion planners"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one sampling campaign against a scenario");
  run_cmd->add_option("scenario", run.scenario_file, "Scenario file")->required();
  run_cmd->add_option("--sampler", run.sampler, "bo or sobol")->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "Episodes to run")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Campaign seed")->capture_default_str();
  run_cmd->add_option("--out", run.out_dir, "Output directory (default: $GOALPROBE_OUT/<id>-<sampler>-s<seed>)");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads for the Sobol baseline")->capture_default_str();
  run_cmd->add_option("--dt", run.dt, "Override simulation step [s]");
  run_cmd->add_option("--horizon", run.horizon, "Override episode length [steps]");
  run_cmd->add_option("--replan-every", run.replan_every, "Override planner period [steps]");
  run_cmd->add_option("--beta", run.beta, "UCB exploration weight");
  run_cmd->add_option("--d-safe", run.d_safe, "Override planner clearance [m]");
  run_cmd->add_option("--candidates", run.candidates, "Acquisition candidate count")->capture_default_str();
  run_cmd->add_option("--nu", run.nu, "Matern smoothness, 1.5 or 2.5")->capture_default_str();
  run_cmd->add_option("--asd-convention", run.asd_convention, "paper or mean_pairwise")->capture_default_str();
  run_cmd->add_option("--planner-cmd", run.planner_cmd, "External planner command (line protocol on stdio)");

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Tabulate campaign statistics");
  report_cmd->add_option("campaigns", report.campaign_dirs, "Campaign directories");
  report_cmd->add_option("--csv", report.csv_path, "Also write the rows as CSV ('-' for stdout)");

  ExportGpOptions gp;
  auto* gp_cmd = app.add_subcommand("export-gp", "Refit the surrogate and export its posterior grid");
  gp_cmd->add_option("campaign", gp.campaign_dir, "Campaign directory")->required();
  gp_cmd->add_option("--resolution", gp.resolution, "Grid cells per axis")->capture_default_str();
  gp_cmd->add_option("--out", gp.out_dir, "Output directory (default: the campaign directory)");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Summarize a stored episode");
  replay_cmd->add_option("episode", replay.episode_file, "Episode JSONL file")->required();
  replay_cmd->add_flag("--summary-only", replay.summary_only, "Skip the per-step listing");

  std::string plan_scenario;
  auto* plan_cmd = app.add_subcommand("plan-stdio", "Serve the reference planner over stdin/stdout");
  plan_cmd->add_option("scenario", plan_scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*run_cmd) return cmd_run(run, out, err);
  if (*report_cmd) return cmd_report(report, out, err);
  if (*gp_cmd) return cmd_export_gp(gp, out, err);
  if (*replay_cmd) return cmd_replay(replay, out, err);
  return cmd_plan_stdio(plan_scenario, in, out, err);
}

}  // namespace goalprobe::cli
