// src/textnorm.cc

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

#include "longalign/textnorm.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <algorithm>

#include "longalign/error.h"

namespace longalign {

namespace {

struct DecodedChar {
  char32_t cp;
  std::size_t begin;  // byte offsets into the raw text
  std::size_t end;
};

std::vector<DecodedChar> DecodeWithOffsets(std::string_view s) {
  std::vector<DecodedChar> out;
  out.reserve(s.size());
  const auto *p = reinterpret_cast<const uint8_t *>(s.data());
  int32_t len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0)
      throw Error(ErrorCode::kInvalidEncoding,
                  "ill-formed UTF-8 at byte " + std::to_string(start));
    out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(start),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

bool IsWordChar(char32_t c) {
  int32_t mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_N_MASK | U_GC_M_MASK)) != 0;
}

bool IsMark(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

bool IsPunctOrSymbol(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool IsControlOrFormat(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & (U_GC_CC_MASK | U_GC_CF_MASK)) != 0;
}

bool IsWhite(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

void AppendUnicodeString(const icu::UnicodeString &us, std::size_t begin,
                         std::size_t end, std::vector<DecodedChar> *out) {
  for (int32_t k = 0; k < us.length();) {
    UChar32 c = us.char32At(k);
    out->push_back({static_cast<char32_t>(c), begin, end});
    k += U16_LENGTH(c);
  }
}

std::vector<DecodedChar> CompatNormalize(const std::vector<DecodedChar> &in) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status))
    throw Error(ErrorCode::kInvalidEncoding, "NFKC tables unavailable");
  std::vector<DecodedChar> out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    // A chunk runs from one normalization boundary to the next; chunks
    // normalize independently, so every output character maps back to
    // its chunk's byte range.
    std::size_t j = i + 1;
    while (j < in.size() && !nfkc->hasBoundaryBefore(static_cast<UChar32>(in[j].cp))) ++j;
    if (j == i + 1 && nfkc->isInert(static_cast<UChar32>(in[i].cp))) {
      out.push_back(in[i]);
    } else {
      icu::UnicodeString chunk;
      for (std::size_t k = i; k < j; ++k) chunk.append(static_cast<UChar32>(in[k].cp));
      icu::UnicodeString norm = nfkc->normalize(chunk, status);
      if (U_FAILURE(status))
        throw Error(ErrorCode::kInvalidEncoding, "NFKC normalization failed");
      AppendUnicodeString(norm, in[i].begin, in[j - 1].end, &out);
    }
    i = j;
  }
  return out;
}

bool IsCased(char32_t c) { return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_CASED); }
bool IsCaseIgnorable(char32_t c) {
  return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_CASE_IGNORABLE);
}

// Unicode Final_Sigma condition for position i.
bool IsFinalSigma(const std::vector<DecodedChar> &s, std::size_t i) {
  std::size_t k = i;
  bool cased_before = false;
  while (k > 0) {
    --k;
    if (IsCaseIgnorable(s[k].cp)) continue;
    cased_before = IsCased(s[k].cp);
    break;
  }
  if (!cased_before) return false;
  for (std::size_t m = i + 1; m < s.size(); ++m) {
    if (IsCaseIgnorable(s[m].cp)) continue;
    return !IsCased(s[m].cp);
  }
  return true;
}

std::vector<DecodedChar> Lowercase(const std::vector<DecodedChar> &in) {
  std::vector<DecodedChar> out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    char32_t c = in[i].cp;
    if (c < 0x80) {
      if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
      out.push_back({c, in[i].begin, in[i].end});
      continue;
    }
    if (c == 0x03A3) {
      out.push_back({IsFinalSigma(in, i) ? char32_t{0x03C2} : char32_t{0x03C3},
                     in[i].begin, in[i].end});
      continue;
    }
    icu::UnicodeString one(static_cast<UChar32>(c));
    one.toLower(icu::Locale::getRoot());
    AppendUnicodeString(one, in[i].begin, in[i].end, &out);
  }
  return out;
}

}  // namespace

nlohmann::json NormProfile::ToJson() const {
  return {{"name", name},
          {"version", version},
          {"compat_normalize", compat_normalize},
          {"lowercase", lowercase},
          {"strip_punctuation", strip_punctuation},
          {"intraword_keep", Utf8Encode(intraword_keep)},
          {"extra_strip", Utf8Encode(extra_strip)}};
}

NormProfile NormProfile::FromJson(const nlohmann::json &j) {
  NormProfile p;
  p.name = j.value("name", p.name);
  p.version = j.value("version", p.version);
  p.compat_normalize = j.value("compat_normalize", p.compat_normalize);
  p.lowercase = j.value("lowercase", p.lowercase);
  p.strip_punctuation = j.value("strip_punctuation", p.strip_punctuation);
  if (j.contains("intraword_keep"))
    p.intraword_keep = Utf8Decode(j.at("intraword_keep").get<std::string>());
  if (j.contains("extra_strip"))
    p.extra_strip = Utf8Decode(j.at("extra_strip").get<std::string>());
  return p;
}

std::u32string Utf8Decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (const auto &d : DecodeWithOffsets(s)) out.push_back(d.cp);
  return out;
}

std::string Utf8Encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[4];
    int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, 4, static_cast<UChar32>(c), err);
    if (err) throw Error(ErrorCode::kInvalidEncoding, "unencodable code point");
    out.append(reinterpret_cast<const char *>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

bool IsValidUtf8(std::string_view s) {
  const auto *p = reinterpret_cast<const uint8_t *>(s.data());
  int32_t len = static_cast<int32_t>(s.size());
  for (int32_t i = 0; i < len;) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

NormText Normalize(std::string_view raw, const NormProfile &profile) {
  std::vector<DecodedChar> s = DecodeWithOffsets(raw);
  if (profile.compat_normalize) s = CompatNormalize(s);
  if (profile.lowercase) s = Lowercase(s);

  NormText nt;
  std::u32string current;
  SourceSpan span;
  auto flush = [&]() {
    if (current.empty()) return;
    nt.token_char_starts.push_back(nt.chars.empty() ? 0 : nt.chars.size() + 1);
    if (!nt.chars.empty()) nt.chars.push_back(U' ');
    nt.chars += current;
    nt.tokens.push_back(Utf8Encode(current));
    nt.source_spans.push_back(span);
    current.clear();
  };

  bool dropping_marks = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char32_t c = s[i].cp;
    if (dropping_marks && IsMark(c)) continue;
    dropping_marks = false;
    if (IsWhite(c)) {
      flush();
      continue;
    }
    bool remove = false;
    if (profile.extra_strip.find(c) != std::u32string::npos) {
      remove = true;
    } else if (IsControlOrFormat(c)) {
      remove = true;
    } else if (profile.strip_punctuation && IsPunctOrSymbol(c)) {
      // The left neighbour is the last kept character of the token, so a
      // removed character never licenses a kept apostrophe or hyphen.
      bool intraword = profile.intraword_keep.find(c) != std::u32string::npos &&
                       !current.empty() && IsWordChar(current.back()) &&
                       i + 1 < s.size() && IsWordChar(s[i + 1].cp);
      remove = !intraword;
    }
    if (remove) {
      // Marks attached to a removed character go with it.
      dropping_marks = true;
      continue;
    }
    if (current.empty()) {
      span = {s[i].begin, s[i].end};
    } else {
      span.begin = std::min(span.begin, s[i].begin);
      span.end = std::max(span.end, s[i].end);
    }
    current.push_back(c);
  }
  flush();
  nt.char_form = Utf8Encode(nt.chars);
  return nt;
}

std::string WindowText(const NormText &nt, std::size_t start_token,
                       std::size_t len_tokens) {
  if (start_token > nt.size() || len_tokens > nt.size() - start_token)
    throw Error(ErrorCode::kOutOfRange,
                "window [" + std::to_string(start_token) + ", +" +
                    std::to_string(len_tokens) + ") exceeds " +
                    std::to_string(nt.size()) + " tokens");
  return Utf8Encode(nt.window_chars(start_token, len_tokens));
}

}  // namespace longalign
