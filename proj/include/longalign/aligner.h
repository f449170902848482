// include/longalign/aligner.h

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

#ifndef LONGALIGN_ALIGNER_H_
#define LONGALIGN_ALIGNER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "longalign/asr_bridge.h"
#include "longalign/cer.h"
#include "longalign/textnorm.h"

namespace longalign {

struct AlignerConfig {
  Ratio theta{3, 10};        // accept threshold, inclusive
  Ratio coarse_gate{3, 10};  // first coarse window strictly below wins
  std::size_t k = 3;
  std::size_t margin_words = 15;
  // Coarse windows above this CER advance by max(1, floor(n * fraction)).
  Ratio skip_high_cer_threshold{7, 10};
  Ratio skip_stride_fraction{1, 2};

  // Throws kConfigInvalid.
  void Validate() const;
  nlohmann::json ToJson() const;
  static AlignerConfig FromJson(const nlohmann::json &j);
};

enum class MatchStage { kCoarseSeq, kCoarseGlobal, kDefaultMatch };

std::string_view MatchStageName(MatchStage s);
// Throws kSchemaError.
MatchStage MatchStageFromName(std::string_view name);

struct CoarseCandidate {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  CerValue cer;
};

// Half-open token span [start_idx, end_idx) of the transcript.
struct AlignmentMatch {
  std::string segment_id;
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  std::string matched_text;
  CerValue cer;
  MatchStage stage = MatchStage::kCoarseSeq;
  bool accepted = false;
};

struct CoarseStats {
  std::size_t evaluated = 0;  // windows whose CER was computed
  std::size_t skipped = 0;    // windows passed over by the stride
};

// Windows of asr.size() tokens from start_idx onward; when fewer tokens
// remain, one truncated window. Returns the first window below the gate, or
// the k lowest by (CER, start). Empty when start_idx == t.size().
// Throws kEmptyTranscript, kOutOfRange, kEmptyReference.
std::vector<CoarseCandidate> CoarseSearch(const NormText &asr, const NormText &t,
                                          std::size_t start_idx, const AlignerConfig &cfg,
                                          CoarseStats *stats = nullptr);

// Best (CER, start, length) over every candidate's start margin and the
// length range around the ASR word count. Throws kNoCandidates.
AlignmentMatch RefinedSearch(const std::vector<CoarseCandidate> &candidates,
                             const NormText &asr, const NormText &t,
                             const AlignerConfig &cfg, MatchStage stage);

// One entry per segment; unusable segments get nullopt. Throws
// kEmptyTranscript.
std::vector<std::optional<AlignmentMatch>> AlignSession(
    const std::vector<AsrSegment> &segments, const NormText &t, const AlignerConfig &cfg);

}  // namespace longalign

#endif  // LONGALIGN_ALIGNER_H_
