// include/longalign/dataset_builder.h

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

#ifndef LONGALIGN_DATASET_BUILDER_H_
#define LONGALIGN_DATASET_BUILDER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "longalign/aligner.h"
#include "longalign/asr_bridge.h"
#include "longalign/links_csv.h"
#include "longalign/selector.h"
#include "longalign/textnorm.h"

namespace longalign {

// Keeps matches with cer < threshold.
std::vector<AlignmentMatch> FilterTier(const std::vector<AlignmentMatch> &matches,
                                       Ratio threshold);

std::vector<Ratio> DefaultTierThresholds();  // 0.30, 0.20, 0.10

// Aligned duration in exact milliseconds, overall and below each threshold.
struct TierStats {
  int64_t total_aligned_ms = 0;
  std::vector<std::pair<Ratio, int64_t>> tiers;  // (threshold, ms), input order

  TierStats &operator+=(const TierStats &other);
  int64_t ms_below(Ratio threshold) const;
  nlohmann::json ToJson() const;
  static TierStats FromJson(const nlohmann::json &j);
};

// A segment counts once, with its lowest CER over the given pairs.
TierStats ComputeTierStats(const std::vector<AsrSegment> &segments,
                           const std::vector<const PairAlignment *> &pairs,
                           const std::vector<Ratio> &thresholds);

struct SummaryContext {
  nlohmann::json norm_profile;
  nlohmann::json aligner_config;
  nlohmann::json segmenter_config;
  nlohmann::json selection_criteria;
  std::string asr_model_tag;
};

nlohmann::json SessionSummaryJson(const SessionRecord &session, std::size_t segment_count,
                                  std::size_t usable_count,
                                  const std::vector<PairSummary> &pairs,
                                  const std::vector<PairSummary> &selected,
                                  const TierStats &tiers, const SummaryContext &ctx);

nlohmann::json AlignmentFileJson(const std::string &session_id, const PairAlignment &pair,
                                 const std::vector<AsrSegment> &segments);
// Inverse of AlignmentFileJson for the match fields. Throws kSchemaError.
PairAlignment PairAlignmentFromJson(const nlohmann::json &j);

// Pretty-printed JSON with a trailing newline, written by temp file and
// rename. Throws kWriteFailed.
void WriteJsonFile(const std::filesystem::path &path, const nlohmann::json &j);
void WriteTextFile(const std::filesystem::path &path, const std::string &content);

void EmitSessionSummary(const std::filesystem::path &path, const nlohmann::json &summary);
void EmitAlignmentFile(const std::filesystem::path &path, const nlohmann::json &alignment);

enum class Split { kTrain, kDev, kTest };
std::string_view SplitName(Split s);

struct SplitRatios {
  double train = 0.98, dev = 0.01, test = 0.01;
  // Throws kConfigInvalid unless non-negative and summing to 1.
  void Validate() const;
};

// Sessions sorted by seeded hash, cut at round(N * cumulative ratio).
std::map<std::string, Split> AssignSplits(const std::vector<std::string> &session_ids,
                                          const SplitRatios &ratios, uint64_t seed);

// Raw transcript text behind a token span, whitespace runs collapsed.
std::string SourceText(const std::string &raw, const NormText &norm, std::size_t start_idx,
                       std::size_t end_idx);

struct ManifestRow {
  std::string segment_id;
  std::string audio_path;
  double start_s = 0, end_s = 0;
  std::string text;
  CerValue cer;
  std::string language;
  std::string transcript_id;  // provenance, not serialized

  // Split is filled in at corpus level.
  std::string ToJsonLine(std::string_view split) const;
};

struct TranscriptText {
  const std::string *raw = nullptr;
  const NormText *norm = nullptr;
};

// One row per segment whose best selected match is below max_cer.
std::vector<ManifestRow> BuildManifestRows(
    const SessionRecord &session, const std::string &audio_path,
    const std::vector<AsrSegment> &segments, const std::vector<const PairAlignment *> &selected,
    const std::map<std::string, TranscriptText> &texts_by_pair_key, Ratio max_cer);

std::string PairKey(const std::string &transcript_id, const std::string &format);

// Per-language sums of session tier stats.
std::map<std::string, TierStats> CorpusStats(
    const std::vector<std::pair<std::string, TierStats>> &per_session_language);
nlohmann::json CorpusStatsJson(const std::map<std::string, TierStats> &table);

}  // namespace longalign

#endif  // LONGALIGN_DATASET_BUILDER_H_
