// src/selector.cc

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

#include "longalign/selector.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "longalign/error.h"

namespace longalign {

namespace {

// Strict weak order: better pairs first.
bool Better(const PairSummary &a, const PairSummary &b) {
  if (a.median_cer.has_value() != b.median_cer.has_value()) return a.median_cer.has_value();
  if (a.median_cer) {
    auto c = *a.median_cer <=> *b.median_cer;
    if (c != 0) return c < 0;
  }
  if (a.match_count != b.match_count) return a.match_count > b.match_count;
  if (a.format != b.format) return a.format < b.format;
  return a.transcript_id < b.transcript_id;
}

nlohmann::json CerJson(const std::optional<CerValue> &c) {
  if (!c) return nullptr;
  return FormatCer(*c);
}

}  // namespace

nlohmann::json PairSummary::ToJson() const {
  nlohmann::json j = {{"transcript_id", transcript_id},
                      {"format", format},
                      {"median_cer", CerJson(median_cer)},
                      {"accepted_fraction", FormatRatio(accepted_fraction)},
                      {"match_count", match_count},
                      {"total_aligned_s", static_cast<double>(total_aligned_ms) / 1000.0}};
  if (median_cer)
    j["median_cer_exact"] = {median_cer->distance, median_cer->denom};
  else
    j["median_cer_exact"] = nullptr;
  j["accepted_fraction_exact"] = {accepted_fraction.num, accepted_fraction.den};
  return j;
}

PairSummary PairSummary::FromJson(const nlohmann::json &j) {
  PairSummary p;
  p.transcript_id = j.at("transcript_id").get<std::string>();
  p.format = j.at("format").get<std::string>();
  if (!j.at("median_cer_exact").is_null())
    p.median_cer = CerValue{j["median_cer_exact"][0].get<std::size_t>(),
                            j["median_cer_exact"][1].get<std::size_t>()};
  p.accepted_fraction = {j.at("accepted_fraction_exact")[0].get<int64_t>(),
                         j.at("accepted_fraction_exact")[1].get<int64_t>()};
  p.match_count = j.at("match_count").get<std::size_t>();
  p.total_aligned_ms = std::llround(j.at("total_aligned_s").get<double>() * 1000.0);
  return p;
}

std::optional<CerValue> MedianCer(std::vector<CerValue> cers) {
  if (cers.empty()) return std::nullopt;
  std::sort(cers.begin(), cers.end(), [](const CerValue &a, const CerValue &b) { return a < b; });
  return cers[(cers.size() - 1) / 2];
}

PairSummary SummarizePair(const std::vector<AsrSegment> &segments, const PairAlignment &pair) {
  if (segments.size() != pair.matches.size())
    throw Error(ErrorCode::kOutOfRange, "match list does not cover the segments");
  PairSummary s;
  s.transcript_id = pair.transcript_id;
  s.format = pair.format;
  std::vector<CerValue> cers;
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!pair.matches[i]) continue;
    cers.push_back(pair.matches[i]->cer);
    if (pair.matches[i]->accepted) ++accepted;
    s.total_aligned_ms += segments[i].duration_ms();
  }
  s.match_count = cers.size();
  s.median_cer = MedianCer(std::move(cers));
  if (s.match_count > 0)
    s.accepted_fraction = {static_cast<int64_t>(accepted), static_cast<int64_t>(s.match_count)};
  return s;
}

PairSummary SelectFormat(const std::vector<PairSummary> &per_format) {
  if (per_format.empty()) throw Error(ErrorCode::kNoCandidates, "no formats to choose from");
  return *std::min_element(per_format.begin(), per_format.end(), Better);
}

nlohmann::json SelectionCriteria::ToJson() const {
  if (kind == Kind::kLowestMedian) return {{"kind", "lowest_median"}};
  return {{"kind", "all_below"}, {"threshold", threshold.ToDouble()}};
}

SelectionCriteria SelectionCriteria::FromJson(const nlohmann::json &j) {
  SelectionCriteria c;
  std::string kind = j.value("kind", std::string("lowest_median"));
  if (kind == "lowest_median") {
    c.kind = Kind::kLowestMedian;
  } else if (kind == "all_below") {
    c.kind = Kind::kAllBelow;
    if (!j.contains("threshold") || !j["threshold"].is_number())
      throw Error(ErrorCode::kConfigInvalid, "all_below needs a numeric threshold");
    c.threshold = Ratio::FromDouble(j["threshold"].get<double>());
    if (c.threshold < Ratio{0, 1} || c.threshold > Ratio{1, 1})
      throw Error(ErrorCode::kConfigInvalid, "selection threshold must be in [0, 1]");
  } else {
    throw Error(ErrorCode::kConfigInvalid, "unknown selection criteria '" + kind + "'");
  }
  return c;
}

std::vector<PairSummary> SelectTranscripts(const std::vector<PairSummary> &per_transcript,
                                           const SelectionCriteria &criteria) {
  std::vector<PairSummary> sorted = per_transcript;
  std::sort(sorted.begin(), sorted.end(), Better);
  std::vector<PairSummary> out;
  if (criteria.kind == SelectionCriteria::Kind::kLowestMedian) {
    if (!sorted.empty() && sorted.front().median_cer) out.push_back(sorted.front());
    return out;
  }
  for (const auto &p : sorted)
    if (p.median_cer && p.median_cer->ratio() <= criteria.threshold) out.push_back(p);
  return out;
}

std::vector<PairSummary> SelectPairs(const std::vector<PairSummary> &pairs,
                                     const SelectionCriteria &criteria) {
  std::map<std::string, std::vector<PairSummary>> by_transcript;
  for (const auto &p : pairs) by_transcript[p.transcript_id].push_back(p);
  std::vector<PairSummary> best;
  for (const auto &[id, formats] : by_transcript) best.push_back(SelectFormat(formats));
  return SelectTranscripts(best, criteria);
}

}  // namespace longalign
