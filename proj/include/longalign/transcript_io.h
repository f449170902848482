// include/longalign/transcript_io.h

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

#ifndef LONGALIGN_TRANSCRIPT_IO_H_
#define LONGALIGN_TRANSCRIPT_IO_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "longalign/textnorm.h"

namespace longalign {

enum class TranscriptFormat { kTxt, kSrt, kHtml, kExternal };

std::string_view TranscriptFormatName(TranscriptFormat f);

// UTF-8 with optional BOM; "\r\n" and lone "\r" become "\n".
// Throws kInvalidEncoding.
std::string ParseTxt(std::string_view bytes);

struct SrtText {
  std::string text;
  std::size_t warnings = 0;  // malformed cues skipped
};

// Cue text in order, joined by single spaces. Cues without a valid
// "HH:MM:SS,mmm --> HH:MM:SS,mmm" line are skipped and counted.
// Throws kNoCuesFound, kInvalidEncoding.
SrtText ParseSrt(std::string_view bytes);

// Lenient: never throws. Drops script/style/comments, breaks lines at block
// elements, decodes entities, replaces ill-formed UTF-8 with U+FFFD.
std::string ParseHtml(std::string_view bytes);

struct ExternalExtractor {
  std::string command;  // "{in}" is replaced by the file path, else appended
  std::string version;  // recorded provenance, free-form
  std::chrono::milliseconds timeout{std::chrono::minutes(5)};
};

// Throws kExtractorFailed, kExtractorTimeout, kInvalidEncoding.
std::string ParseExternal(const std::filesystem::path &path,
                          const ExternalExtractor &extractor);

// Default cleaning instructions, shipped verbatim and versioned.
extern const char *const kDefaultCleaningPrompt;
extern const char *const kDefaultCleaningPromptVersion;

struct LlmHook {
  enum class Mode {
    kLengthPrefixed,  // stdin: "<n>\n<prompt bytes><m>\n<page bytes>"
    kFileArgs,        // {prompt_file} and {page_file} placeholders
  };
  std::string command;
  Mode mode = Mode::kLengthPrefixed;
  std::string system_prompt = kDefaultCleaningPrompt;
  std::string prompt_version = kDefaultCleaningPromptVersion;
  std::chrono::milliseconds timeout{std::chrono::minutes(5)};
  std::set<std::string> formats = {"pdf"};  // transcript formats it applies to
};

// One page through the hook. Throws kHookFailed.
std::string LlmClean(std::string_view page_text, const LlmHook &hook);

enum class Cleaning { kNone, kLlm };

struct CleanResult {
  std::string text;
  Cleaning cleaning = Cleaning::kNone;
  std::string prompt_version;
  std::vector<std::string> warnings;
};

// Cleans every form-feed separated page. Any hook failure falls back to the
// uncleaned text and records a warning.
CleanResult CleanPages(std::string_view text, const LlmHook &hook);

struct ParserEntry {
  TranscriptFormat kind = TranscriptFormat::kTxt;
  std::optional<ExternalExtractor> extractor;
};

// Maps a declared format / file extension (lowercase, no dot) to a parser.
class ParserRegistry {
 public:
  // txt, srt, html and htm.
  static ParserRegistry Default();

  void RegisterExternal(const std::string &format, ExternalExtractor extractor);
  bool Contains(const std::string &format) const;
  // Throws kUnknownFormat.
  const ParserEntry &Lookup(const std::string &format) const;
  std::vector<std::string> Formats() const;

 private:
  std::map<std::string, ParserEntry> entries_;
};

struct TranscriptDocument {
  std::string transcript_id;
  std::string format;  // declared format, e.g. "pdf"
  TranscriptFormat kind = TranscriptFormat::kTxt;
  std::string raw_text;
  NormText norm;
  Cleaning cleaning = Cleaning::kNone;
  std::string prompt_version;
  std::string extractor;  // command and version for external formats
  std::vector<std::string> warnings;
};

// Parses, optionally cleans, and normalizes one transcript file.
TranscriptDocument LoadTranscript(const std::string &transcript_id,
                                  const std::string &format,
                                  const std::filesystem::path &path,
                                  const ParserRegistry &registry,
                                  const NormProfile &profile,
                                  const std::optional<LlmHook> &llm = std::nullopt);

std::string ReadFileBytes(const std::filesystem::path &path);

}  // namespace longalign

#endif  // LONGALIGN_TRANSCRIPT_IO_H_
