// include/longalign/selector.h

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

#ifndef LONGALIGN_SELECTOR_H_
#define LONGALIGN_SELECTOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "longalign/aligner.h"
#include "longalign/asr_bridge.h"
#include "longalign/cer.h"

namespace longalign {

// One (transcript, format) candidate aligned against a session's segments;
// matches[i] belongs to segments[i].
struct PairAlignment {
  std::string transcript_id;
  std::string format;
  std::vector<std::optional<AlignmentMatch>> matches;
};

struct PairSummary {
  std::string transcript_id;
  std::string format;
  std::optional<CerValue> median_cer;  // null without matches
  Ratio accepted_fraction{0, 1};
  std::size_t match_count = 0;
  int64_t total_aligned_ms = 0;

  nlohmann::json ToJson() const;
  static PairSummary FromJson(const nlohmann::json &j);
};

// Lower middle element of the sorted CERs.
std::optional<CerValue> MedianCer(std::vector<CerValue> cers);

// Aggregates every non-null match, default_match entries included.
PairSummary SummarizePair(const std::vector<AsrSegment> &segments, const PairAlignment &pair);

// Lowest median; ties go to more matches, then the smaller format name.
// Pairs without a median rank last.
PairSummary SelectFormat(const std::vector<PairSummary> &per_format);

struct SelectionCriteria {
  enum class Kind { kLowestMedian, kAllBelow };
  Kind kind = Kind::kLowestMedian;
  Ratio threshold{3, 10};  // kAllBelow keeps median <= threshold

  nlohmann::json ToJson() const;
  // Throws kConfigInvalid.
  static SelectionCriteria FromJson(const nlohmann::json &j);
};

std::vector<PairSummary> SelectTranscripts(const std::vector<PairSummary> &per_transcript,
                                           const SelectionCriteria &criteria);

// SelectFormat within each transcript_id, then SelectTranscripts.
std::vector<PairSummary> SelectPairs(const std::vector<PairSummary> &pairs,
                                     const SelectionCriteria &criteria);

}  // namespace longalign

#endif  // LONGALIGN_SELECTOR_H_
