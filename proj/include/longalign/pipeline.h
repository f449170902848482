// include/longalign/pipeline.h

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

#ifndef LONGALIGN_PIPELINE_H_
#define LONGALIGN_PIPELINE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "longalign/config.h"
#include "longalign/job_store.h"

namespace longalign {

struct RunOptions {
  int workers = 1;
  std::set<std::string> sessions;  // empty: all
};

struct StageReport {
  Stage stage = Stage::kFetch;
  std::size_t completed = 0;
  // Sessions that ended this run failed at the stage, with the reason.
  std::vector<std::pair<std::string, std::string>> failed;
};

// Artifacts live under <work_dir>/artifacts/<stage>/<key>/ where key is the
// first 16 hex digits of sha256(session_id "\0" stage). Per-session outputs
// go to <work_dir>/output/<session_id>/, corpus outputs to <work_dir>/output/.
class Pipeline {
 public:
  // log receives one JSON line per job state transition; human gets
  // summaries.
  Pipeline(PipelineConfig cfg, std::ostream &log, std::ostream &human);

  const PipelineConfig &config() const { return cfg_; }
  JobStore &store() { return *store_; }

  // Returns the number of sessions added.
  std::size_t Ingest(const std::filesystem::path &links_csv);

  // Throws kStageOrderViolation, without claiming anything, when a targeted
  // session that has not failed is still short of the stage's input state.
  // Unknown targeted sessions throw kConfigInvalid.
  StageReport RunStage(Stage stage, const RunOptions &opts);

  // Every stage in order for whatever is runnable, then corpus outputs.
  std::vector<StageReport> RunAll(const RunOptions &opts);

  // manifest.jsonl, stats.json and splits.json over all emitted sessions.
  void WriteCorpusOutputs();

  nlohmann::json Stats();
  nlohmann::json Splits();

  std::filesystem::path ArtifactDir(const std::string &session_id, Stage stage) const;
  std::filesystem::path OutputDir() const { return cfg_.work_dir / "output"; }

 private:
  StageReport RunWorkers(Stage stage, const RunOptions &opts);
  void Worker(Stage stage, int index, const RunOptions &opts, StageReport &report);
  std::map<std::string, std::string> Execute(Stage stage, const JobRecord &job);
  std::map<std::string, std::string> DoFetch(const SessionRecord &s);
  std::map<std::string, std::string> DoSegment(const SessionRecord &s);
  std::map<std::string, std::string> DoTranscribe(const SessionRecord &s);
  std::map<std::string, std::string> DoAlign(const SessionRecord &s);
  std::map<std::string, std::string> DoSelect(const SessionRecord &s);
  std::map<std::string, std::string> DoEmit(const SessionRecord &s);
  void Log(const nlohmann::json &event);

  PipelineConfig cfg_;
  std::unique_ptr<JobStore> store_;
  std::ostream &log_;
  std::ostream &human_;
  std::mutex mu_;
};

// Exit status for a finished command: 0 when nothing newly failed, else 1.
int ExitCode(const std::vector<StageReport> &reports);

}  // namespace longalign

#endif  // LONGALIGN_PIPELINE_H_
