// src/dataset_builder.cc

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

#include "longalign/dataset_builder.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include "longalign/error.h"
#include "longalign/hashing.h"

namespace longalign {

namespace {

nlohmann::json RatioExact(const Ratio &r) { return {r.num, r.den}; }

Ratio RatioFromExact(const nlohmann::json &j) {
  return {j.at(0).get<int64_t>(), j.at(1).get<int64_t>()};
}

double Hours(int64_t ms) { return static_cast<double>(ms) / 3.6e6; }
double Seconds(int64_t ms) { return static_cast<double>(ms) / 1000.0; }

}  // namespace

std::vector<AlignmentMatch> FilterTier(const std::vector<AlignmentMatch> &matches,
                                       Ratio threshold) {
  std::vector<AlignmentMatch> out;
  for (const auto &m : matches)
    if (m.cer.ratio() < threshold) out.push_back(m);
  return out;
}

std::vector<Ratio> DefaultTierThresholds() { return {{3, 10}, {1, 5}, {1, 10}}; }

TierStats &TierStats::operator+=(const TierStats &other) {
  total_aligned_ms += other.total_aligned_ms;
  for (const auto &[t, ms] : other.tiers) {
    auto it = std::find_if(tiers.begin(), tiers.end(), [&](const auto &x) { return x.first == t; });
    if (it == tiers.end())
      tiers.emplace_back(t, ms);
    else
      it->second += ms;
  }
  return *this;
}

int64_t TierStats::ms_below(Ratio threshold) const {
  for (const auto &[t, ms] : tiers)
    if (t == threshold) return ms;
  throw Error(ErrorCode::kOutOfRange, "no tier at " + FormatRatio(threshold));
}

nlohmann::json TierStats::ToJson() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto &[t, ms] : tiers)
    ts.push_back({{"cer_below", FormatRatio(t)},
                  {"cer_below_exact", RatioExact(t)},
                  {"aligned_ms", ms},
                  {"aligned_s", Seconds(ms)},
                  {"aligned_h", Hours(ms)}});
  return {{"total_aligned_ms", total_aligned_ms},
          {"total_aligned_s", Seconds(total_aligned_ms)},
          {"total_aligned_h", Hours(total_aligned_ms)},
          {"tiers", ts}};
}

TierStats TierStats::FromJson(const nlohmann::json &j) {
  TierStats s;
  s.total_aligned_ms = j.at("total_aligned_ms").get<int64_t>();
  for (const auto &t : j.at("tiers"))
    s.tiers.emplace_back(RatioFromExact(t.at("cer_below_exact")), t.at("aligned_ms").get<int64_t>());
  return s;
}

TierStats ComputeTierStats(const std::vector<AsrSegment> &segments,
                           const std::vector<const PairAlignment *> &pairs,
                           const std::vector<Ratio> &thresholds) {
  TierStats s;
  for (const auto &t : thresholds) s.tiers.emplace_back(t, 0);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    std::optional<CerValue> best;
    for (const auto *p : pairs)
      if (i < p->matches.size() && p->matches[i] && (!best || p->matches[i]->cer < *best))
        best = p->matches[i]->cer;
    if (!best) continue;
    const int64_t ms = segments[i].duration_ms();
    s.total_aligned_ms += ms;
    for (auto &[t, total] : s.tiers)
      if (best->ratio() < t) total += ms;
  }
  return s;
}

nlohmann::json SessionSummaryJson(const SessionRecord &session, std::size_t segment_count,
                                  std::size_t usable_count,
                                  const std::vector<PairSummary> &pairs,
                                  const std::vector<PairSummary> &selected,
                                  const TierStats &tiers, const SummaryContext &ctx) {
  nlohmann::json transcripts = nlohmann::json::array();
  for (const auto &t : session.transcripts)
    transcripts.push_back({{"transcript_id", t.transcript_id}, {"format", t.format}, {"url", t.url}});
  std::vector<PairSummary> sorted = pairs;
  std::sort(sorted.begin(), sorted.end(), [](const PairSummary &a, const PairSummary &b) {
    return std::tie(a.transcript_id, a.format) < std::tie(b.transcript_id, b.format);
  });
  nlohmann::json pj = nlohmann::json::array();
  for (const auto &p : sorted) pj.push_back(p.ToJson());
  nlohmann::json sel = nullptr;
  if (!selected.empty()) {
    sel = nlohmann::json::array();
    for (const auto &p : selected) sel.push_back({{"transcript_id", p.transcript_id}, {"format", p.format}});
  }
  return {{"session_id", session.session_id},
          {"video_id", session.video_id},
          {"media_url", session.media_url},
          {"language", session.language},
          {"segment_count", segment_count},
          {"usable_segment_count", usable_count},
          {"transcripts", transcripts},
          {"pairs", pj},
          {"selected", sel},
          {"tier_stats", tiers.ToJson()},
          {"norm_profile", ctx.norm_profile},
          {"aligner_config", ctx.aligner_config},
          {"segmenter_config", ctx.segmenter_config},
          {"selection_criteria", ctx.selection_criteria},
          {"asr_model_tag", ctx.asr_model_tag}};
}

nlohmann::json AlignmentFileJson(const std::string &session_id, const PairAlignment &pair,
                                 const std::vector<AsrSegment> &segments) {
  if (segments.size() != pair.matches.size())
    throw Error(ErrorCode::kOutOfRange, "match list does not cover the segments");
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto &seg = segments[i];
    nlohmann::json r = {{"segment_id", seg.segment_id},
                        {"start_s", seg.start_s},
                        {"end_s", seg.end_s},
                        {"asr_text", seg.asr_text_raw}};
    if (const auto &m = pair.matches[i]) {
      r["matched_text"] = m->matched_text;
      r["cer"] = FormatCer(m->cer);
      r["cer_exact"] = {m->cer.distance, m->cer.denom};
      r["stage"] = MatchStageName(m->stage);
      r["accepted"] = m->accepted;
      r["start_idx"] = m->start_idx;
      r["end_idx"] = m->end_idx;
    } else {
      for (const char *k : {"matched_text", "cer", "cer_exact", "stage", "accepted", "start_idx", "end_idx"})
        r[k] = nullptr;
    }
    records.push_back(std::move(r));
  }
  return {{"session_id", session_id},
          {"transcript_id", pair.transcript_id},
          {"format", pair.format},
          {"records", records}};
}

PairAlignment PairAlignmentFromJson(const nlohmann::json &j) {
  try {
    PairAlignment p;
    p.transcript_id = j.at("transcript_id").get<std::string>();
    p.format = j.at("format").get<std::string>();
    for (const auto &r : j.at("records")) {
      if (r.at("cer_exact").is_null()) {
        p.matches.emplace_back();
        continue;
      }
      AlignmentMatch m;
      m.segment_id = r.at("segment_id").get<std::string>();
      m.start_idx = r.at("start_idx").get<std::size_t>();
      m.end_idx = r.at("end_idx").get<std::size_t>();
      m.matched_text = r.at("matched_text").get<std::string>();
      m.cer = {r["cer_exact"][0].get<std::size_t>(), r["cer_exact"][1].get<std::size_t>()};
      m.stage = MatchStageFromName(r.at("stage").get<std::string>());
      m.accepted = r.at("accepted").get<bool>();
      p.matches.push_back(std::move(m));
    }
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kSchemaError, std::string("alignment file: ") + e.what());
  }
}

void WriteTextFile(const std::filesystem::path &path, const std::string &content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kWriteFailed, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kWriteFailed, "cannot move into " + path.string());
  }
}

void WriteJsonFile(const std::filesystem::path &path, const nlohmann::json &j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

void EmitSessionSummary(const std::filesystem::path &path, const nlohmann::json &summary) {
  WriteJsonFile(path, summary);
}

void EmitAlignmentFile(const std::filesystem::path &path, const nlohmann::json &alignment) {
  WriteJsonFile(path, alignment);
}

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

void SplitRatios::Validate() const {
  if (train < 0 || dev < 0 || test < 0 || std::abs(train + dev + test - 1.0) > 1e-9)
    throw Error(ErrorCode::kConfigInvalid, "split ratios must be non-negative and sum to 1");
}

std::map<std::string, Split> AssignSplits(const std::vector<std::string> &session_ids,
                                          const SplitRatios &ratios, uint64_t seed) {
  ratios.Validate();
  std::vector<std::pair<uint64_t, std::string>> keyed;
  for (const auto &id : session_ids) keyed.emplace_back(Fnv1a64(id, seed), id);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  const double n = static_cast<double>(keyed.size());
  const auto cut1 = static_cast<std::size_t>(std::llround(n * ratios.train));
  const auto cut2 = static_cast<std::size_t>(std::llround(n * (ratios.train + ratios.dev)));
  std::map<std::string, Split> out;
  for (std::size_t i = 0; i < keyed.size(); ++i)
    out[keyed[i].second] = i < cut1 ? Split::kTrain : (i < cut2 ? Split::kDev : Split::kTest);
  return out;
}

std::string SourceText(const std::string &raw, const NormText &norm, std::size_t start_idx,
                       std::size_t end_idx) {
  if (start_idx >= end_idx || end_idx > norm.size())
    throw Error(ErrorCode::kOutOfRange, "empty or out-of-range span");
  const std::size_t b = norm.source_spans[start_idx].begin;
  const std::size_t e = norm.source_spans[end_idx - 1].end;
  std::string out;
  bool space = false;
  for (std::size_t i = b; i < e && i < raw.size(); ++i) {
    char c = raw[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string ManifestRow::ToJsonLine(std::string_view split) const {
  nlohmann::ordered_json j;
  j["segment_id"] = segment_id;
  j["audio_path"] = audio_path;
  j["start_s"] = start_s;
  j["end_s"] = end_s;
  j["text"] = text;
  j["cer"] = FormatCer(cer);
  j["language"] = language;
  j["split"] = split;
  return j.dump() + "\n";
}

std::string PairKey(const std::string &transcript_id, const std::string &format) {
  return transcript_id + "." + format;
}

std::vector<ManifestRow> BuildManifestRows(
    const SessionRecord &session, const std::string &audio_path,
    const std::vector<AsrSegment> &segments, const std::vector<const PairAlignment *> &selected,
    const std::map<std::string, TranscriptText> &texts_by_pair_key, Ratio max_cer) {
  std::vector<ManifestRow> rows;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const PairAlignment *best_pair = nullptr;
    const AlignmentMatch *best = nullptr;
    for (const auto *p : selected) {
      if (i >= p->matches.size() || !p->matches[i]) continue;
      if (!best || p->matches[i]->cer < best->cer) {
        best = &*p->matches[i];
        best_pair = p;
      }
    }
    if (!best || !(best->cer.ratio() < max_cer)) continue;
    auto it = texts_by_pair_key.find(PairKey(best_pair->transcript_id, best_pair->format));
    if (it == texts_by_pair_key.end())
      throw Error(ErrorCode::kOutOfRange, "no transcript text for " + best_pair->transcript_id);
    ManifestRow r;
    r.segment_id = segments[i].segment_id;
    r.audio_path = audio_path;
    r.start_s = segments[i].start_s;
    r.end_s = segments[i].end_s;
    r.text = SourceText(*it->second.raw, *it->second.norm, best->start_idx, best->end_idx);
    r.cer = best->cer;
    r.language = session.language;
    r.transcript_id = best_pair->transcript_id;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::map<std::string, TierStats> CorpusStats(
    const std::vector<std::pair<std::string, TierStats>> &per_session_language) {
  std::map<std::string, TierStats> out;
  for (const auto &[lang, stats] : per_session_language) out[lang] += stats;
  return out;
}

nlohmann::json CorpusStatsJson(const std::map<std::string, TierStats> &table) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[lang, stats] : table) j[lang] = stats.ToJson();
  return j;
}

}  // namespace longalign
