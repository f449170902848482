// src/transcript_io.cc

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

#include "longalign/transcript_io.h"

#include <unicode/utf8.h>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "longalign/error.h"
#include "longalign/subprocess.h"

namespace longalign {

const char *const kDefaultCleaningPrompt =
    "You are a multilingual assistant specialized in processing parliamentary "
    "transcripts. Your task is to clean the provided transcript page by removing "
    "all unnecessary metadata, annotations etc. while preserving only the literal "
    "spoken dialogue. Please follow these instructions:\n"
    "Remove the speaker labels that appear as headers before each speaker's "
    "dialogue.\n"
    "Remove all annotations, procedural notes, timestamps, and non-verbal cues.\n"
    "Ensure that only and all the spoken dialogue is in your response.\n"
    "Respond in the same language as the input and do not alter the spoken text.";
const char *const kDefaultCleaningPromptVersion = "parliament-clean-v1";

namespace {

std::string_view StripBom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

std::string CanonicalNewlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out += '\n';
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string SanitizeUtf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  const auto *p = reinterpret_cast<const uint8_t *>(s.data());
  int32_t len = static_cast<int32_t>(s.size());
  for (int32_t i = 0; i < len;) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0)
      out += "\xEF\xBF\xBD";
    else
      out.append(s.data() + start, static_cast<std::size_t>(i - start));
  }
  return out;
}

void AppendCodePoint(uint32_t cp, std::string *out) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  out->append(Utf8Encode(std::u32string(1, static_cast<char32_t>(cp))));
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::map<std::string, uint32_t> &NamedEntities() {
  static const std::map<std::string, uint32_t> kEntities = {
      {"amp", '&'},     {"lt", '<'},      {"gt", '>'},      {"quot", '"'},
      {"apos", '\''},   {"nbsp", 0xA0},   {"shy", 0xAD},    {"copy", 0xA9},
      {"reg", 0xAE},    {"deg", 0xB0},    {"laquo", 0xAB},  {"raquo", 0xBB},
      {"ndash", 0x2013}, {"mdash", 0x2014}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
      {"sbquo", 0x201A}, {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"bdquo", 0x201E},
      {"hellip", 0x2026}, {"euro", 0x20AC}, {"sect", 0xA7},  {"para", 0xB6},
      {"middot", 0xB7}, {"times", 0xD7},  {"divide", 0xF7}, {"szlig", 0xDF},
      {"auml", 0xE4},   {"ouml", 0xF6},   {"uuml", 0xFC},   {"Auml", 0xC4},
      {"Ouml", 0xD6},   {"Uuml", 0xDC},   {"aacute", 0xE1}, {"eacute", 0xE9},
      {"iacute", 0xED}, {"oacute", 0xF3}, {"uacute", 0xFA}, {"Aacute", 0xC1},
      {"Eacute", 0xC9}, {"Iacute", 0xCD}, {"Oacute", 0xD3}, {"Uacute", 0xDA},
      {"agrave", 0xE0}, {"egrave", 0xE8}, {"igrave", 0xEC}, {"ograve", 0xF2},
      {"ugrave", 0xF9}, {"Agrave", 0xC0}, {"Egrave", 0xC8}, {"acirc", 0xE2},
      {"ecirc", 0xEA},  {"icirc", 0xEE},  {"ocirc", 0xF4},  {"ucirc", 0xFB},
      {"ccedil", 0xE7}, {"Ccedil", 0xC7}, {"ntilde", 0xF1}, {"Ntilde", 0xD1},
      {"atilde", 0xE3}, {"otilde", 0xF5}, {"aring", 0xE5},  {"Aring", 0xC5},
      {"aelig", 0xE6},  {"AElig", 0xC6},  {"oslash", 0xF8}, {"Oslash", 0xD8},
      {"euml", 0xEB},   {"iuml", 0xEF},   {"yuml", 0xFF},   {"thorn", 0xFE},
      {"eth", 0xF0},
  };
  return kEntities;
}

// Decodes the entity starting at s[i] == '&'. Returns the number of bytes
// consumed, or 0 if it is not a recognizable entity.
std::size_t DecodeEntity(std::string_view s, std::size_t i, std::string *out) {
  std::size_t semi = s.find(';', i + 1);
  if (semi == std::string_view::npos || semi - i > 12) return 0;
  std::string_view body = s.substr(i + 1, semi - i - 1);
  if (body.size() >= 2 && body[0] == '#') {
    bool hex = body[1] == 'x' || body[1] == 'X';
    std::string_view digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    uint32_t cp = 0;
    for (char c : digits) {
      int v;
      if (c >= '0' && c <= '9')
        v = c - '0';
      else if (hex && c >= 'a' && c <= 'f')
        v = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F')
        v = c - 'A' + 10;
      else
        return 0;
      cp = cp * (hex ? 16 : 10) + static_cast<uint32_t>(v);
      if (cp > 0x10FFFF) cp = 0x110000;
    }
    AppendCodePoint(cp, out);
    return semi - i + 1;
  }
  auto it = NamedEntities().find(std::string(body));
  if (it == NamedEntities().end()) return 0;
  AppendCodePoint(it->second, out);
  return semi - i + 1;
}

bool IsBlockTag(const std::string &t) {
  static const std::set<std::string> kBlock = {
      "p",       "div",    "br",     "li",      "ul",      "ol",     "h1",
      "h2",      "h3",     "h4",     "h5",      "h6",      "tr",     "td",
      "th",      "table",  "section", "article", "header",  "footer", "blockquote",
      "pre",     "hr",     "dd",     "dt",      "dl",      "title",  "body",
      "html",    "head",   "main",   "nav",     "aside",   "figure", "figcaption",
      "address", "center", "form",   "fieldset", "caption", "thead", "tbody"};
  return kBlock.count(t) > 0;
}

std::string CollapseLines(const std::string &text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string collapsed;
    bool space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
        space = !collapsed.empty();
      } else {
        if (space) collapsed += ' ';
        space = false;
        collapsed += c;
      }
    }
    if (collapsed.empty()) continue;
    if (!out.empty()) out += '\n';
    out += collapsed;
  }
  return out;
}

std::string StripInlineMarkup(const std::string &line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '<') {
      std::size_t close = line.find('>', i);
      if (close != std::string::npos) {
        i = close;
        continue;
      }
    }
    if (line[i] == '{' && i + 1 < line.size() && line[i + 1] == '\\') {
      std::size_t close = line.find('}', i);
      if (close != std::string::npos) {
        i = close;
        continue;
      }
    }
    out += line[i];
  }
  return out;
}

std::string Trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\f\v\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\f\v\n");
  return s.substr(b, e - b + 1);
}

std::filesystem::path WriteTempFile(const std::string &tag, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  auto dir = std::filesystem::temp_directory_path();
  auto path = dir / ("longalign-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++) + "-" + tag);
  std::ofstream f(path, std::ios::binary);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return path;
}

}  // namespace

std::string_view TranscriptFormatName(TranscriptFormat f) {
  switch (f) {
    case TranscriptFormat::kTxt: return "txt";
    case TranscriptFormat::kSrt: return "srt";
    case TranscriptFormat::kHtml: return "html";
    case TranscriptFormat::kExternal: return "external";
  }
  return "unknown";
}

std::string ParseTxt(std::string_view bytes) {
  bytes = StripBom(bytes);
  if (!IsValidUtf8(bytes))
    throw Error(ErrorCode::kInvalidEncoding, "transcript is not valid UTF-8");
  return CanonicalNewlines(bytes);
}

SrtText ParseSrt(std::string_view bytes) {
  std::string text = ParseTxt(bytes);
  static const std::regex kTiming(
      R"(^\s*\d{1,2}:\d{2}:\d{2}[,.]\d{1,3}\s*-->\s*\d{1,2}:\d{2}:\d{2}[,.]\d{1,3}(\s.*)?$)");
  static const std::regex kIndex(R"(^\s*\d+\s*$)");

  std::vector<std::vector<std::string>> blocks(1);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) {
      if (!blocks.back().empty()) blocks.emplace_back();
    } else {
      blocks.back().push_back(line);
    }
  }
  if (blocks.back().empty()) blocks.pop_back();

  SrtText result;
  std::size_t cues = 0;
  for (const auto &block : blocks) {
    std::size_t t = 0;
    if (std::regex_match(block[0], kIndex)) t = 1;
    if (t >= block.size() || !std::regex_match(block[t], kTiming)) {
      ++result.warnings;
      continue;
    }
    ++cues;
    for (std::size_t k = t + 1; k < block.size(); ++k) {
      std::string cue = Trim(StripInlineMarkup(block[k]));
      if (cue.empty()) continue;
      if (!result.text.empty()) result.text += ' ';
      result.text += cue;
    }
  }
  if (cues == 0) throw Error(ErrorCode::kNoCuesFound, "no SRT cue parsed");
  return result;
}

std::string ParseHtml(std::string_view raw) {
  std::string s = SanitizeUtf8(StripBom(raw));
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '&') {
      std::size_t used = DecodeEntity(s, i, &out);
      if (used) {
        i += used;
      } else {
        out += '&';
        ++i;
      }
      continue;
    }
    if (c != '<') {
      out += c;
      ++i;
      continue;
    }
    if (s.compare(i, 4, "<!--") == 0) {
      std::size_t end = s.find("-->", i + 4);
      i = end == std::string::npos ? s.size() : end + 3;
      continue;
    }
    std::size_t j = i + 1;
    bool closing = j < s.size() && s[j] == '/';
    if (closing) ++j;
    std::size_t name_start = j;
    while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
    if (j == name_start && !(j < s.size() && (s[j] == '!' || s[j] == '?'))) {
      out += '<';  // a bare '<' in text
      ++i;
      continue;
    }
    std::string name = Lower(std::string_view(s).substr(name_start, j - name_start));
    // tag end, ignoring '>' inside quoted attribute values
    char quote = 0;
    while (j < s.size()) {
      if (quote) {
        if (s[j] == quote) quote = 0;
      } else if (s[j] == '"' || s[j] == '\'') {
        quote = s[j];
      } else if (s[j] == '>') {
        break;
      }
      ++j;
    }
    i = j < s.size() ? j + 1 : s.size();
    if (!closing && (name == "script" || name == "style")) {
      std::string lower_rest = Lower(std::string_view(s).substr(i));
      std::size_t end = lower_rest.find("</" + name);
      if (end == std::string::npos) {
        i = s.size();
      } else {
        std::size_t gt = s.find('>', i + end);
        i = gt == std::string::npos ? s.size() : gt + 1;
      }
      continue;
    }
    if (IsBlockTag(name)) out += '\n';
  }
  return CollapseLines(out);
}

std::string ParseExternal(const std::filesystem::path &path,
                          const ExternalExtractor &extractor) {
  std::string cmd = extractor.command;
  if (cmd.find("{in}") == std::string::npos) cmd += " {in}";
  ProcessResult r = RunCommand(ExpandCommand(cmd, {{"in", path.string()}}), {},
                               extractor.timeout);
  if (r.timed_out)
    throw Error(ErrorCode::kExtractorTimeout,
                "extractor timed out on " + path.string());
  if (r.exit_code != 0)
    throw Error(ErrorCode::kExtractorFailed,
                "extractor exited with " + std::to_string(r.exit_code) + ": " +
                    Trim(r.err));
  return ParseTxt(r.out);
}

std::string LlmClean(std::string_view page_text, const LlmHook &hook) {
  ProcessResult r;
  if (hook.mode == LlmHook::Mode::kLengthPrefixed) {
    std::string payload = std::to_string(hook.system_prompt.size()) + "\n" +
                          hook.system_prompt + std::to_string(page_text.size()) +
                          "\n" + std::string(page_text);
    r = RunCommand(hook.command, payload, hook.timeout);
  } else {
    auto prompt_file = WriteTempFile("prompt.txt", hook.system_prompt);
    auto page_file = WriteTempFile("page.txt", page_text);
    std::string cmd = hook.command;
    if (cmd.find("{prompt_file}") == std::string::npos &&
        cmd.find("{page_file}") == std::string::npos)
      cmd += " {prompt_file} {page_file}";
    r = RunCommand(ExpandCommand(cmd, {{"prompt_file", prompt_file.string()},
                                       {"page_file", page_file.string()}}),
                   {}, hook.timeout);
    std::error_code ec;
    std::filesystem::remove(prompt_file, ec);
    std::filesystem::remove(page_file, ec);
  }
  if (r.timed_out) throw Error(ErrorCode::kHookFailed, "cleaning hook timed out");
  if (r.exit_code != 0)
    throw Error(ErrorCode::kHookFailed,
                "cleaning hook exited with " + std::to_string(r.exit_code));
  if (!IsValidUtf8(r.out))
    throw Error(ErrorCode::kHookFailed, "cleaning hook output is not UTF-8");
  return CanonicalNewlines(r.out);
}

CleanResult CleanPages(std::string_view text, const LlmHook &hook) {
  CleanResult result;
  try {
    std::string cleaned;
    std::size_t start = 0;
    while (true) {
      std::size_t ff = text.find('\f', start);
      std::string_view page = text.substr(start, ff == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : ff - start);
      cleaned += LlmClean(page, hook);
      if (ff == std::string_view::npos) break;
      cleaned += '\f';
      start = ff + 1;
    }
    result.text = std::move(cleaned);
    result.cleaning = Cleaning::kLlm;
    result.prompt_version = hook.prompt_version;
  } catch (const Error &e) {
    result.text = std::string(text);
    result.cleaning = Cleaning::kNone;
    result.warnings.push_back(std::string("cleaning skipped: ") + e.what());
  }
  return result;
}

ParserRegistry ParserRegistry::Default() {
  ParserRegistry r;
  r.entries_["txt"] = {TranscriptFormat::kTxt, std::nullopt};
  r.entries_["srt"] = {TranscriptFormat::kSrt, std::nullopt};
  r.entries_["html"] = {TranscriptFormat::kHtml, std::nullopt};
  r.entries_["htm"] = {TranscriptFormat::kHtml, std::nullopt};
  return r;
}

void ParserRegistry::RegisterExternal(const std::string &format,
                                      ExternalExtractor extractor) {
  entries_[Lower(format)] = {TranscriptFormat::kExternal, std::move(extractor)};
}

bool ParserRegistry::Contains(const std::string &format) const {
  return entries_.count(Lower(format)) > 0;
}

const ParserEntry &ParserRegistry::Lookup(const std::string &format) const {
  auto it = entries_.find(Lower(format));
  if (it == entries_.end())
    throw Error(ErrorCode::kUnknownFormat, "no parser for format '" + format + "'");
  return it->second;
}

std::vector<std::string> ParserRegistry::Formats() const {
  std::vector<std::string> out;
  for (const auto &[k, v] : entries_) out.push_back(k);
  return out;
}

std::string ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TranscriptDocument LoadTranscript(const std::string &transcript_id,
                                  const std::string &format,
                                  const std::filesystem::path &path,
                                  const ParserRegistry &registry,
                                  const NormProfile &profile,
                                  const std::optional<LlmHook> &llm) {
  const ParserEntry &entry = registry.Lookup(format);
  TranscriptDocument doc;
  doc.transcript_id = transcript_id;
  doc.format = Lower(format);
  doc.kind = entry.kind;
  switch (entry.kind) {
    case TranscriptFormat::kTxt:
      doc.raw_text = ParseTxt(ReadFileBytes(path));
      break;
    case TranscriptFormat::kSrt: {
      SrtText srt = ParseSrt(ReadFileBytes(path));
      doc.raw_text = std::move(srt.text);
      if (srt.warnings)
        doc.warnings.push_back(std::to_string(srt.warnings) + " malformed SRT cues skipped");
      break;
    }
    case TranscriptFormat::kHtml:
      doc.raw_text = ParseHtml(ReadFileBytes(path));
      break;
    case TranscriptFormat::kExternal:
      doc.raw_text = ParseExternal(path, *entry.extractor);
      doc.extractor = entry.extractor->command +
                      (entry.extractor->version.empty() ? "" : " @" + entry.extractor->version);
      break;
  }
  if (llm && llm->formats.count(doc.format)) {
    CleanResult cleaned = CleanPages(doc.raw_text, *llm);
    doc.raw_text = std::move(cleaned.text);
    doc.cleaning = cleaned.cleaning;
    doc.prompt_version = cleaned.prompt_version;
    for (auto &w : cleaned.warnings) doc.warnings.push_back(std::move(w));
  }
  doc.norm = Normalize(doc.raw_text, profile);
  return doc;
}

}  // namespace longalign
