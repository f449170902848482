// tests/test_textnorm.cc

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

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "longalign/error.h"
#include "longalign/textnorm.h"

using namespace longalign;

namespace {

std::string Joined(const NormText &nt) {
  std::string out;
  for (std::size_t i = 0; i < nt.tokens.size(); ++i) {
    if (i) out += ' ';
    out += nt.tokens[i];
  }
  return out;
}

// Random text over ASCII words, punctuation and a handful of non-ASCII
// characters that exercise NFKC, casing and combining marks.
std::string RandomText(std::mt19937 &rng) {
  static const std::vector<std::string> kPieces = {
      "a", "B", "c", "Q", "z", "0", "7", " ", " ", "  ", "\t", "\n", ",", ".",
      "'", "-", "!", "(", ")", "é", "É", "ß", "ﬁ", "Σ", "σ", "́", " ",
      "ＡＢ", "½", "—", "’", "​", "İ", "ŉ", "x²"};
  std::uniform_int_distribution<int> len(0, 24);
  std::uniform_int_distribution<std::size_t> pick(0, kPieces.size() - 1);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s += kPieces[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("normalize collapses whitespace, case and punctuation") {
  NormText nt = Normalize("  The QUICK,  brown fox. ");
  CHECK(nt.tokens == std::vector<std::string>{"the", "quick", "brown", "fox"});
  CHECK(nt.char_form == "the quick brown fox");
  CHECK(nt.token_char_starts == std::vector<std::size_t>{0, 4, 10, 16});
  CHECK(nt.source_spans[1] == SourceSpan{6, 11});
}

TEST_CASE("normalize empty input") {
  NormText nt = Normalize("");
  CHECK(nt.tokens.empty());
  CHECK(nt.char_form.empty());
  CHECK(Normalize("  \t\n ,.; ").tokens.empty());
}

TEST_CASE("normalize matches the unicodedata reference on golden inputs") {
  // Expected values produced by tests/oracles/normalize_oracle.py.
  struct Golden {
    const char *in;
    const char *out;
  };
  const Golden kGolden[] = {
      {"Straße ﬁn", "straße fin"},
      {"  The QUICK,  brown fox. ", "the quick brown fox"},
      {"ＡＢＣ　ｄｅｆ", "abc def"},
      {"ΟΔΟΣ ΟΔΟΣ.",
       "οδος οδος"},
      {"l'homme — c'est-à-dire", "l'homme c'est-à-dire"},
      {"½ ① ™ x²", "12 1 tm x2"},
      {"Ǆemal İstanbul", "džemal i̇stanbul"},
      {"é café", "é café"},
      {"don't 'quoted' - dash", "don't quoted dash"},
      {"1,000.50 €", "100050"},
  };
  for (const auto &g : kGolden) {
    CAPTURE(g.in);
    CHECK(Normalize(g.in).char_form == g.out);
  }
}

TEST_CASE("normalize rejects ill-formed UTF-8") {
  try {
    Normalize("ab\xff\xfe");
    FAIL("expected InvalidEncoding");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kInvalidEncoding);
  }
  CHECK_THROWS_AS(Normalize("\xc0\x80"), Error);  // overlong NUL
}

TEST_CASE("profile switches") {
  NormProfile keep_case;
  keep_case.lowercase = false;
  CHECK(Normalize("Hello, World", keep_case).char_form == "Hello World");
  NormProfile keep_punct;
  keep_punct.strip_punctuation = false;
  CHECK(Normalize("a, b.", keep_punct).char_form == "a, b.");
  NormProfile extra;
  extra.extra_strip = U"x";
  CHECK(Normalize("axb", extra).char_form == "ab");
  NormProfile round = NormProfile::FromJson(extra.ToJson());
  CHECK(round.extra_strip == U"x");
  CHECK(round.intraword_keep == extra.intraword_keep);
}

TEST_CASE("window_text") {
  NormText abc = Normalize("a b c");
  CHECK(WindowText(abc, 1, 2) == "b c");
  CHECK(WindowText(abc, 2, 0) == "");
  CHECK(WindowText(abc, 3, 0) == "");
  NormText fox = Normalize("the quick brown fox");
  CHECK(WindowText(fox, 0, 4) == "the quick brown fox");
  try {
    WindowText(abc, 2, 2);
    FAIL("expected OutOfRange");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
  CHECK_THROWS_AS(WindowText(abc, 4, 0), Error);
}

TEST_CASE("normalize properties on random text") {
  std::mt19937 rng(1234);
  for (int iter = 0; iter < 3000; ++iter) {
    std::string raw = RandomText(rng);
    CAPTURE(raw);
    NormText nt = Normalize(raw);
    REQUIRE(nt.tokens.size() == nt.source_spans.size());
    REQUIRE(nt.tokens.size() == nt.token_char_starts.size());
    // structure
    CHECK(nt.char_form == Joined(nt));
    CHECK(Utf8Encode(nt.chars) == nt.char_form);
    for (std::size_t i = 0; i < nt.tokens.size(); ++i) {
      CHECK(!nt.tokens[i].empty());
      CHECK(nt.tokens[i].find(' ') == std::string::npos);
      if (i > 0) {
        CHECK(nt.token_char_starts[i] > nt.token_char_starts[i - 1]);
        CHECK(nt.source_spans[i].begin >= nt.source_spans[i - 1].end);
      }
      // round-trip locality
      std::string slice = raw.substr(nt.source_spans[i].begin,
                                     nt.source_spans[i].end - nt.source_spans[i].begin);
      CHECK(Normalize(slice).tokens == std::vector<std::string>{nt.tokens[i]});
      CHECK(WindowText(nt, i, 1) == nt.tokens[i]);
    }
    // idempotence
    CHECK(Normalize(nt.char_form).tokens == nt.tokens);
    CHECK(WindowText(nt, 0, nt.size()) == nt.char_form);
  }
}
