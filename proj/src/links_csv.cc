// src/links_csv.cc

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

#include "longalign/links_csv.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "longalign/error.h"
#include "longalign/textnorm.h"
#include "longalign/transcript_io.h"

namespace longalign {

nlohmann::json SessionRecord::ToJson() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto &t : transcripts)
    ts.push_back({{"transcript_id", t.transcript_id}, {"url", t.url}, {"format", t.format}});
  return {{"session_id", session_id}, {"video_id", video_id}, {"media_url", media_url},
          {"language", language},     {"transcripts", ts}};
}

SessionRecord SessionRecord::FromJson(const nlohmann::json &j) {
  SessionRecord r;
  r.session_id = j.at("session_id").get<std::string>();
  r.video_id = j.value("video_id", std::string());
  r.media_url = j.at("media_url").get<std::string>();
  r.language = j.value("language", std::string());
  for (const auto &t : j.at("transcripts"))
    r.transcripts.push_back({t.at("transcript_id").get<std::string>(),
                             t.at("url").get<std::string>(), t.at("format").get<std::string>()});
  return r;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text,
                                               std::vector<std::size_t> *record_lines) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false, field_started = false, any = false;
  std::size_t line = 1, record_line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) {
      rows.push_back(std::move(row));
      if (record_lines) record_lines->push_back(record_line);
    }
    row.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!any) {
      record_line = line;
      any = true;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      ++line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw RowError(ErrorCode::kSchemaError, record_line, "unterminated quote");
  if (any) end_record();
  return rows;
}

std::vector<SessionRecord> ParseLinksCsv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  if (!IsValidUtf8(text)) throw RowError(ErrorCode::kSchemaError, 1, "not valid UTF-8");
  std::vector<std::size_t> lines;
  auto rows = ParseCsv(text, &lines);
  if (rows.empty()) throw RowError(ErrorCode::kSchemaError, 1, "missing header");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  for (const char *name : kLinksCsvColumns)
    if (!col.count(name))
      throw RowError(ErrorCode::kSchemaError, lines[0], std::string("missing column ") + name);

  std::vector<SessionRecord> out;
  std::map<std::string, std::size_t> index;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const std::size_t line = lines[r];
    if (row.size() != rows[0].size())
      throw RowError(ErrorCode::kSchemaError, line,
                     "expected " + std::to_string(rows[0].size()) + " fields, got " +
                         std::to_string(row.size()));
    auto cell = [&](const char *name) { return row[col[name]]; };
    for (const char *name : {"session_id", "media_url", "transcript_id", "transcript_url",
                             "transcript_format", "language"})
      if (cell(name).empty())
        throw RowError(ErrorCode::kSchemaError, line, std::string("empty ") + name);
    std::string fmt = cell("transcript_format");
    std::transform(fmt.begin(), fmt.end(), fmt.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!fmt.empty() && fmt[0] == '.') fmt.erase(0, 1);

    const std::string sid = cell("session_id");
    auto [it, fresh] = index.try_emplace(sid, out.size());
    if (fresh) {
      SessionRecord rec;
      rec.session_id = sid;
      rec.video_id = cell("video_id");
      rec.media_url = cell("media_url");
      rec.language = cell("language");
      out.push_back(std::move(rec));
    }
    SessionRecord &rec = out[it->second];
    if (rec.media_url != cell("media_url") || rec.video_id != cell("video_id") ||
        rec.language != cell("language"))
      throw RowError(ErrorCode::kSchemaError, line,
                     "session " + sid + " has conflicting media_url, video_id or language");
    if (!seen.emplace(sid, cell("transcript_id"), fmt).second)
      throw RowError(ErrorCode::kDuplicateTranscript, line,
                     "transcript " + cell("transcript_id") + " (" + fmt +
                         ") listed twice for session " + sid);
    rec.transcripts.push_back({cell("transcript_id"), cell("transcript_url"), fmt});
  }
  return out;
}

std::vector<SessionRecord> LoadLinksCsv(const std::filesystem::path &path) {
  return ParseLinksCsv(ReadFileBytes(path));
}

}  // namespace longalign
