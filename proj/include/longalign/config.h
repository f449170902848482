// include/longalign/config.h

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

#ifndef LONGALIGN_CONFIG_H_
#define LONGALIGN_CONFIG_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "longalign/aligner.h"
#include "longalign/asr_bridge.h"
#include "longalign/cer.h"
#include "longalign/dataset_builder.h"
#include "longalign/fetch.h"
#include "longalign/segmenter.h"
#include "longalign/selector.h"
#include "longalign/textnorm.h"
#include "longalign/transcript_io.h"

namespace longalign {

// Everything one pipeline run depends on. Relative paths in the file are
// taken relative to the file's directory.
struct PipelineConfig {
  std::filesystem::path links_csv;
  std::filesystem::path work_dir;
  std::filesystem::path store_dir;  // default <work_dir>/store

  int workers = 1;
  int max_retries = 3;
  int64_t lease_ms = 600000;
  int64_t backoff_ms = 1000;  // doubled on every further attempt
  std::chrono::milliseconds stage_timeout{std::chrono::minutes(30)};

  NormProfile norm;
  SegmenterConfig segmenter;
  AlignerConfig aligner;
  SelectionCriteria selection;
  std::vector<Ratio> tiers = DefaultTierThresholds();
  Ratio manifest_max_cer{3, 10};  // manifest rows keep cer < this
  SplitRatios splits;
  uint64_t split_seed = 0;

  std::string vad_command;      // empty: built-in energy VAD
  std::optional<AsrAdapter> asr;
  std::filesystem::path precomputed_asr_dir;  // <dir>/<session_id>.jsonl
  std::string convert_command;  // empty: media must already be WAV
  std::vector<FetchHandler> fetch_handlers;
  std::map<std::string, ExternalExtractor> extractors;
  std::optional<LlmHook> llm;

  // Throws kConfigInvalid.
  void Validate() const;
  ParserRegistry Registry() const;
  FetchOptions Fetch() const;
};

// Throws kConfigInvalid; the result is validated. LONGALIGN_STORE overrides
// store_dir.
PipelineConfig ParseConfig(const nlohmann::json &j, const std::filesystem::path &base_dir);
PipelineConfig LoadConfig(const std::filesystem::path &path);

}  // namespace longalign

#endif  // LONGALIGN_CONFIG_H_
