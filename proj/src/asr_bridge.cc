// src/asr_bridge.cc

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

#include "longalign/asr_bridge.h"

#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "longalign/error.h"
#include "longalign/subprocess.h"
#include "longalign/transcript_io.h"

namespace longalign {

namespace {

double RoundMs(double s) { return std::round(s * 1000.0) / 1000.0; }

}  // namespace

int64_t AsrSegment::duration_ms() const {
  return std::llround(end_s * 1000.0) - std::llround(start_s * 1000.0);
}

std::string MakeSegmentId(const std::string &session_id, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", index);
  return session_id + "_" + buf;
}

AsrResult TranscribeViaAdapter(const std::filesystem::path &audio_path,
                               const std::vector<SpeechInterval> &intervals,
                               const AsrAdapter &adapter, const std::string &session_id,
                               const NormProfile &profile) {
  std::string request;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    nlohmann::json line = {{"i", i},
                           {"start_s", RoundMs(intervals[i].start_s)},
                           {"end_s", RoundMs(intervals[i].end_s)}};
    request += line.dump() + "\n";
  }
  std::string cmd = adapter.command;
  if (cmd.find("{audio}") == std::string::npos) cmd += " {audio}";
  ProcessResult r = RunCommand(
      ExpandCommand(cmd, {{"audio", audio_path.string()}, {"session_id", session_id}}),
      request, adapter.timeout);
  if (!r.ok())
    throw Error(ErrorCode::kAdapterFailed,
                r.timed_out ? "ASR adapter timed out"
                            : "ASR adapter exited with " + std::to_string(r.exit_code));

  std::vector<std::optional<std::string>> texts(intervals.size());
  AsrResult result;
  std::istringstream in(r.out);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &) {
      throw Error(ErrorCode::kMalformedAdapterOutput,
                  "ASR adapter line " + std::to_string(line_no) + " is not JSON");
    }
    if (!j.is_object() || !j.contains("i") || !j["i"].is_number_unsigned() ||
        !j.contains("text") || !j["text"].is_string())
      throw Error(ErrorCode::kMalformedAdapterOutput,
                  "ASR adapter line " + std::to_string(line_no) + " lacks i/text");
    auto i = j["i"].get<std::size_t>();
    if (i >= intervals.size()) {
      result.warnings.push_back("ASR adapter returned unknown index " + std::to_string(i));
      continue;
    }
    if (texts[i]) {
      result.warnings.push_back("ASR adapter repeated index " + std::to_string(i));
      continue;
    }
    std::string text = j["text"].get<std::string>();
    if (!IsValidUtf8(text))
      throw Error(ErrorCode::kMalformedAdapterOutput, "ASR text is not valid UTF-8");
    texts[i] = std::move(text);
  }

  for (std::size_t i = 0; i < intervals.size(); ++i) {
    AsrSegment seg;
    seg.segment_id = MakeSegmentId(session_id, i);
    seg.start_s = RoundMs(intervals[i].start_s);
    seg.end_s = RoundMs(intervals[i].end_s);
    seg.asr_model_tag = adapter.model_tag;
    if (texts[i]) {
      seg.asr_text_raw = *texts[i];
      seg.asr_norm = Normalize(seg.asr_text_raw, profile);
      if (!seg.usable())
        result.warnings.push_back(seg.segment_id + ": empty transcription, unusable");
    } else {
      result.warnings.push_back(seg.segment_id + ": no transcription returned, unusable");
    }
    result.segments.push_back(std::move(seg));
  }
  return result;
}

std::vector<AsrSegment> ParsePrecomputed(const std::string &jsonl,
                                         const SegmenterConfig &bounds,
                                         const NormProfile &profile) {
  std::vector<AsrSegment> out;
  std::set<std::string> ids;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t line_no = 0;
  constexpr double kTol = 1e-6;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string &why) {
      throw RowError(ErrorCode::kSchemaError, line_no, why);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &) {
      fail("not a JSON object");
    }
    if (!j.is_object()) fail("not a JSON object");
    if (!j.contains("segment_id") || !j["segment_id"].is_string()) fail("missing segment_id");
    if (!j.contains("start_s") || !j["start_s"].is_number()) fail("missing start_s");
    if (!j.contains("end_s") || !j["end_s"].is_number()) fail("missing end_s");
    if (!j.contains("text") || !j["text"].is_string()) fail("missing text");
    AsrSegment seg;
    seg.segment_id = j["segment_id"].get<std::string>();
    seg.start_s = j["start_s"].get<double>();
    seg.end_s = j["end_s"].get<double>();
    seg.asr_text_raw = j["text"].get<std::string>();
    seg.asr_model_tag = j.value("asr_model_tag", std::string("precomputed"));
    if (!(seg.start_s >= 0) || !(seg.end_s > seg.start_s)) fail("end_s must exceed start_s");
    double d = seg.end_s - seg.start_s;
    if (d < bounds.min_len_s - kTol || d > bounds.max_len_s + kTol)
      fail("duration " + std::to_string(d) + " s outside segmenter bounds");
    if (!out.empty() && seg.start_s < out.back().start_s) fail("segments not ordered by start_s");
    if (!ids.insert(seg.segment_id).second) fail("duplicate segment_id " + seg.segment_id);
    if (!IsValidUtf8(seg.asr_text_raw)) fail("text is not valid UTF-8");
    seg.asr_norm = Normalize(seg.asr_text_raw, profile);
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<AsrSegment> LoadPrecomputed(const std::filesystem::path &jsonl_path,
                                        const SegmenterConfig &bounds,
                                        const NormProfile &profile) {
  return ParsePrecomputed(ReadFileBytes(jsonl_path), bounds, profile);
}

std::string SerializePrecomputed(const std::vector<AsrSegment> &segments) {
  std::string out;
  for (const auto &s : segments) {
    nlohmann::json j = {{"segment_id", s.segment_id},
                        {"start_s", s.start_s},
                        {"end_s", s.end_s},
                        {"text", s.asr_text_raw},
                        {"asr_model_tag", s.asr_model_tag}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace longalign
