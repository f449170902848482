// tools/longalign.cc

// Copyright 2026  longalign authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// longalign: run the corpus pipeline stage by stage or end to end.
//
// Exit status: 0 when no session newly failed, 1 on per-session failures,
// 2 on configuration or usage errors, 3 when a stage is run too early.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "longalign/config.h"
#include "longalign/error.h"
#include "longalign/job_store.h"
#include "longalign/pipeline.h"

using namespace longalign;

namespace {

std::set<std::string> SplitList(const std::string &s) {
  std::set<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.insert(item);
  return out;
}

void PrintStatsTable(const nlohmann::json &stats, std::ostream &os) {
  const auto &langs = stats.at("languages");
  os << "language  total_h";
  std::vector<std::string> heads;
  if (!langs.empty())
    for (const auto &t : langs.begin()->at("tiers"))
      heads.push_back("<" + t.at("cer_below").get<std::string>());
  for (const auto &h : heads) os << "  " << h;
  os << "\n";
  for (const auto &[lang, s] : langs.items()) {
    os << lang << "  " << s.at("total_aligned_h").dump();
    for (const auto &t : s.at("tiers")) os << "  " << t.at("aligned_h").dump();
    os << "\n";
  }
  for (const auto &[state, n] : stats.at("job_states").items())
    os << state << ": " << n.dump() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Align long-form recordings with their transcripts and build a corpus."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  int workers = 0;
  std::string sessions;
  double stage_timeout_s = 0;
  app.add_option("--config", config_path, "Pipeline config JSON")->required();
  app.add_option("--workers", workers, "Worker threads (default from config)")
      ->check(CLI::Range(1, 256));
  app.add_option("--sessions", sessions, "Comma separated session ids to target");
  app.add_option("--stage-timeout", stage_timeout_s, "Timeout for external commands, seconds")
      ->check(CLI::PositiveNumber);

  std::string links;
  auto *ingest = app.add_subcommand("ingest", "Load a links CSV into the job store");
  ingest->add_option("links_csv", links, "Links CSV (default from config)");
  std::map<CLI::App *, Stage> stage_cmds;
  for (Stage s : AllStages()) {
    std::string name(StageName(s));
    stage_cmds[app.add_subcommand(name, "Run the " + name + " stage")] = s;
  }
  auto *stats = app.add_subcommand("stats", "Aligned hours per language and tier");
  auto *splits = app.add_subcommand("splits", "Train/dev/test assignment of emitted sessions");
  auto *run_all = app.add_subcommand("run-all", "Ingest and run every stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    PipelineConfig cfg = LoadConfig(config_path);
    if (workers > 0) cfg.workers = workers;
    if (stage_timeout_s > 0)
      cfg.stage_timeout = std::chrono::milliseconds(static_cast<int64_t>(stage_timeout_s * 1000));
    RunOptions opts;
    opts.workers = cfg.workers;
    opts.sessions = SplitList(sessions);
    Pipeline pipeline(cfg, std::cout, std::cerr);

    if (ingest->parsed()) {
      std::filesystem::path p = links.empty() ? cfg.links_csv : std::filesystem::path(links);
      if (p.empty()) throw Error(ErrorCode::kConfigInvalid, "no links CSV given");
      pipeline.Ingest(p);
      return 0;
    }
    if (stats->parsed()) {
      nlohmann::json j = pipeline.Stats();
      std::cout << j.dump() << "\n";
      PrintStatsTable(j, std::cerr);
      return 0;
    }
    if (splits->parsed()) {
      std::cout << pipeline.Splits().dump() << "\n";
      return 0;
    }
    if (run_all->parsed()) {
      if (!cfg.links_csv.empty()) pipeline.Ingest(cfg.links_csv);
      return ExitCode(pipeline.RunAll(opts));
    }
    for (const auto &[cmd, stage] : stage_cmds)
      if (cmd->parsed()) return ExitCode({pipeline.RunStage(stage, opts)});
  } catch (const Error &e) {
    std::cerr << "longalign: " << e.what() << "\n";
    if (e.code() == ErrorCode::kConfigInvalid) return 2;
    if (e.code() == ErrorCode::kStageOrderViolation) return 3;
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "longalign: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
