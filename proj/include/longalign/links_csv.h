// include/longalign/links_csv.h

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

#ifndef LONGALIGN_LINKS_CSV_H_
#define LONGALIGN_LINKS_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace longalign {

struct TranscriptRef {
  std::string transcript_id;
  std::string url;
  std::string format;  // lowercase, e.g. "pdf"
};

// One recording and its candidate transcripts.
struct SessionRecord {
  std::string session_id;
  std::string video_id;
  std::string media_url;
  std::string language;
  std::vector<TranscriptRef> transcripts;

  nlohmann::json ToJson() const;
  static SessionRecord FromJson(const nlohmann::json &j);
};

// The exact header columns.
inline constexpr const char *kLinksCsvColumns[] = {
    "session_id",    "video_id",          "media_url", "transcript_id",
    "transcript_url", "transcript_format", "language"};

// RFC 4180 records split into fields; quoted fields may span lines.
// Throws RowError(kSchemaError) on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text,
                                               std::vector<std::size_t> *record_lines = nullptr);

// Rows grouped by session_id in order of first appearance. A transcript is
// identified by (transcript_id, transcript_format) within its session.
// Throws RowError(kSchemaError), RowError(kDuplicateTranscript).
std::vector<SessionRecord> ParseLinksCsv(std::string_view text);
std::vector<SessionRecord> LoadLinksCsv(const std::filesystem::path &path);

}  // namespace longalign

#endif  // LONGALIGN_LINKS_CSV_H_
