// include/longalign/textnorm.h

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

#ifndef LONGALIGN_TEXTNORM_H_
#define LONGALIGN_TEXTNORM_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace longalign {

// Named, versioned normalization settings. Every manifest embeds the profile
// that produced its CER numbers.
struct NormProfile {
  std::string name = "default";
  int version = 1;
  bool compat_normalize = true;   // NFKC
  bool lowercase = true;
  bool strip_punctuation = true;  // general categories P* and S*
  // Punctuation kept when both neighbours are letters, digits or marks.
  std::u32string intraword_keep = U"'’ʼ-‐‑";
  // Additional characters always removed.
  std::u32string extra_strip;

  nlohmann::json ToJson() const;
  static NormProfile FromJson(const nlohmann::json &j);
};

// Byte range [begin, end) into the raw text a token came from.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const SourceSpan &) const = default;
};

// Normalized text. Character offsets are Unicode code point offsets into
// `chars`, which holds char_form decoded.
struct NormText {
  std::vector<std::string> tokens;
  std::string char_form;
  std::u32string chars;
  std::vector<std::size_t> token_char_starts;
  std::vector<SourceSpan> source_spans;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Code point offset one past the last character of token i.
  std::size_t token_char_end(std::size_t i) const {
    return i + 1 < token_char_starts.size() ? token_char_starts[i + 1] - 1
                                            : chars.size();
  }

  // Characters of the token slice [start, start + len) without bounds checks.
  std::u32string_view window_chars(std::size_t start, std::size_t len) const {
    if (len == 0) return {};
    std::size_t b = token_char_starts[start];
    return std::u32string_view(chars).substr(b, token_char_end(start + len - 1) - b);
  }
};

// Strict UTF-8 decoding; throws kInvalidEncoding on ill-formed input.
std::u32string Utf8Decode(std::string_view s);
std::string Utf8Encode(std::u32string_view s);
bool IsValidUtf8(std::string_view s);

// NFKC, lowercase, punctuation removal, whitespace collapse and trim, in
// that order. Throws kInvalidEncoding.
NormText Normalize(std::string_view raw, const NormProfile &profile = {});

// Space-joined token slice [start_token, start_token + len_tokens).
// Throws kOutOfRange.
std::string WindowText(const NormText &nt, std::size_t start_token,
                       std::size_t len_tokens);

}  // namespace longalign

#endif  // LONGALIGN_TEXTNORM_H_
