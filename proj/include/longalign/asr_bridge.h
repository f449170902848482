// include/longalign/asr_bridge.h

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

#ifndef LONGALIGN_ASR_BRIDGE_H_
#define LONGALIGN_ASR_BRIDGE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "longalign/segmenter.h"
#include "longalign/textnorm.h"

namespace longalign {

// One utterance and its machine transcription: the alignment query.
struct AsrSegment {
  std::string segment_id;
  double start_s = 0;
  double end_s = 0;
  std::string asr_text_raw;
  NormText asr_norm;
  std::string asr_model_tag;

  // Segments with no normalized text are carried through with a null match.
  bool usable() const { return !asr_norm.empty(); }
  int64_t duration_ms() const;
};

std::string MakeSegmentId(const std::string &session_id, std::size_t index);

struct AsrResult {
  std::vector<AsrSegment> segments;
  std::vector<std::string> warnings;
};

struct AsrAdapter {
  // "{audio}" and "{session_id}" placeholders; the audio path is appended
  // when "{audio}" is absent. stdin carries one {"i","start_s","end_s"} JSON
  // line per interval; stdout must carry {"i","text"} JSON lines.
  std::string command;
  std::string model_tag = "external";
  std::chrono::milliseconds timeout{std::chrono::minutes(30)};
};

// Segments come back in interval order; intervals the adapter did not answer
// become unusable segments with a warning. Throws kAdapterFailed,
// kMalformedAdapterOutput.
AsrResult TranscribeViaAdapter(const std::filesystem::path &audio_path,
                               const std::vector<SpeechInterval> &intervals,
                               const AsrAdapter &adapter, const std::string &session_id,
                               const NormProfile &profile);

// JSONL of {"segment_id","start_s","end_s","text"}. Durations are checked
// against the segmenter bounds. Throws RowError(kSchemaError).
std::vector<AsrSegment> LoadPrecomputed(const std::filesystem::path &jsonl_path,
                                        const SegmenterConfig &bounds,
                                        const NormProfile &profile);
std::vector<AsrSegment> ParsePrecomputed(const std::string &jsonl,
                                         const SegmenterConfig &bounds,
                                         const NormProfile &profile);

// Inverse of ParsePrecomputed (adds "asr_model_tag").
std::string SerializePrecomputed(const std::vector<AsrSegment> &segments);

}  // namespace longalign

#endif  // LONGALIGN_ASR_BRIDGE_H_
