// tests/test_aligner.cc

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

#include "doctest.h"
#include "fixtures/align_fixtures.h"
#include "fixtures/oracle_bridge.h"
#include "fixtures/test_util.h"
#include "longalign/aligner.h"
#include "longalign/error.h"

using namespace longalign;
using fixture::CodeOf;

using fixture::RunOracle;

TEST_CASE("coarse search returns the first window under the gate") {
  AlignerConfig cfg;
  NormText t = Normalize("the quick brown fox jumps over the lazy dog");
  NormText asr = Normalize("brown fox jumps");
  auto c = CoarseSearch(asr, t, 0, cfg);
  REQUIRE(c.size() == 1);
  CHECK(c[0].start_idx == 2);
  CHECK(c[0].end_idx == 5);
  CHECK(c[0].cer.distance == 0);

  CHECK(CoarseSearch(asr, t, t.size(), cfg).empty());
  CHECK(CodeOf([&] { CoarseSearch(asr, t, t.size() + 1, cfg); }) == ErrorCode::kOutOfRange);
  CHECK(CodeOf([&] { CoarseSearch(asr, NormText{}, 0, cfg); }) == ErrorCode::kEmptyTranscript);
}

TEST_CASE("coarse search keeps the k best when nothing passes the gate") {
  std::mt19937_64 rng(7);
  AlignerConfig cfg;
  NormText t = Normalize(fixture::RandomWords(rng, 30));
  NormText asr = Normalize("0123 456 78");
  auto got = CoarseSearch(asr, t, 0, cfg);
  auto want = oracle::Coarse(fixture::ToOracle(asr), fixture::ToOracle(t), 0,
                             fixture::ToOracle(cfg));
  REQUIRE(got.size() == 3);
  REQUIRE(want.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(got[i].start_idx == want[i].s);
    CHECK(got[i].cer.distance == want[i].d);
  }
  CHECK(got[0].cer <= got[1].cer);
  CHECK(got[1].cer <= got[2].cer);
}

TEST_CASE("coarse search near the end uses one truncated window") {
  AlignerConfig cfg;
  NormText t = Normalize("a b c d e f");
  NormText asr = Normalize("e f g h");
  auto c = CoarseSearch(asr, t, 4, cfg);
  REQUIRE(c.size() == 1);
  CHECK(c[0].start_idx == 4);
  CHECK(c[0].end_idx == 6);
}

TEST_CASE("high-CER stride skips windows without changing the result") {
  std::mt19937_64 rng(11);
  AlignerConfig cfg;
  {
    // three partial matches, then a long run sharing no characters with the
    // query: every window there is provably worse than the k-th best
    const std::string query = "abcdefgh ijklmnop qrstuvwx yzabcdef ghijklmn opqrstuv wxyzabcd efghijkl";
    const std::string partial = "abcdzzzz ijklzzzz qrstzzzz yzabzzzz ghijzzzz opqrzzzz wxyzzzzz efghzzzz";
    std::string text = partial + " " + partial + " " + partial;
    for (int i = 0; i < 200; ++i) text += " " + std::to_string(i % 10);
    NormText t = Normalize(text);
    NormText asr = Normalize(query);
    CoarseStats stats;
    auto got = CoarseSearch(asr, t, 0, cfg, &stats);
    auto want = oracle::Coarse(fixture::ToOracle(asr), fixture::ToOracle(t), 0,
                               fixture::ToOracle(cfg));
    CHECK(stats.evaluated + stats.skipped == t.size() - asr.size() + 1);
    CHECK(stats.skipped > 0);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].start_idx == want[i].s);
      CHECK(got[i].cer.distance == want[i].d);
    }
  }

  for (int trial = 0; trial < 40; ++trial) {
    NormText t = Normalize(fixture::RandomWords(rng, 200));
    NormText asr = Normalize(fixture::RandomWords(rng, fixture::Uniform(rng, 2, 16)));
    std::size_t start = fixture::Uniform(rng, 0, 60);
    auto got = CoarseSearch(asr, t, start, cfg);
    auto want = oracle::Coarse(fixture::ToOracle(asr), fixture::ToOracle(t), start,
                               fixture::ToOracle(cfg));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].start_idx == want[i].s);
      CHECK(got[i].cer.distance == want[i].d);
    }
  }
}

TEST_CASE("refined search") {
  AlignerConfig cfg;
  NormText t = Normalize("the quick brown fox jumps over the lazy dog");
  NormText asr = Normalize("brown fox jumps");
  CoarseCandidate early{1, 4, {}};
  auto m = RefinedSearch({early}, asr, t, cfg, MatchStage::kCoarseSeq);
  CHECK(m.start_idx == 2);
  CHECK(m.end_idx == 5);
  CHECK(m.cer.distance == 0);
  CHECK(m.matched_text == "brown fox jumps");
  CHECK(m.accepted);
  CHECK(m.stage == MatchStage::kCoarseSeq);

  // short transcript: grid clipped at both ends
  NormText shortt = Normalize("one two three four five six seven");
  NormText five = Normalize("two three four five six");
  m = RefinedSearch({{0, 5, {}}}, five, shortt, cfg, MatchStage::kCoarseGlobal);
  CHECK(m.start_idx == 1);
  CHECK(m.end_idx == 6);

  // equal CER: earlier start wins
  NormText rep = Normalize("alpha beta gamma alpha beta");
  NormText ab = Normalize("alpha beta");
  m = RefinedSearch({{3, 5, {}}}, ab, rep, cfg, MatchStage::kCoarseSeq);
  CHECK(m.start_idx == 0);
  CHECK(m.end_idx == 2);

  CHECK(CodeOf([&] { RefinedSearch({}, asr, t, cfg, MatchStage::kCoarseSeq); }) ==
        ErrorCode::kNoCandidates);
}

TEST_CASE("refined search matches the grid oracle") {
  std::mt19937_64 rng(3);
  AlignerConfig cfg;
  for (int trial = 0; trial < 60; ++trial) {
    NormText t = Normalize(fixture::RandomWords(rng, fixture::Uniform(rng, 1, 80)));
    std::string src = fixture::RandomWords(rng, fixture::Uniform(rng, 1, 20));
    NormText asr = Normalize(fixture::Corrupt(rng, src, 0.3) + " x");
    std::vector<CoarseCandidate> cands;
    std::vector<std::size_t> starts;
    for (std::size_t i = fixture::Uniform(rng, 1, 3); i > 0; --i) {
      std::size_t s = fixture::Uniform(rng, 0, t.size() - 1);
      cands.push_back({s, s + 1, {}});
      starts.push_back(s);
    }
    auto got = RefinedSearch(cands, asr, t, cfg, MatchStage::kCoarseSeq);
    auto want = oracle::Refine(starts, fixture::ToOracle(asr), fixture::ToOracle(t),
                               fixture::ToOracle(cfg));
    CHECK(got.start_idx == want.s);
    CHECK(got.end_idx == want.e);
    CHECK(got.cer.distance == want.d);
  }
}

TEST_CASE("verbatim sessions tile the transcript") {
  std::mt19937_64 rng(5);
  AlignerConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    fixture::AlignCaseOptions o;
    o.min_segments = o.max_segments = 10;
    auto c = fixture::MakeAlignCase(rng, o);
    NormText t = Normalize(c.transcript);
    auto ms = AlignSession(fixture::ToSegments(c), t, cfg);
    std::size_t prev_end = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      REQUIRE(ms[i]);
      CHECK(ms[i]->cer.distance == 0);
      CHECK(ms[i]->accepted);
      CHECK(ms[i]->stage == MatchStage::kCoarseSeq);
      CHECK(ms[i]->start_idx == prev_end);
      CHECK(ms[i]->end_idx > prev_end);
      CHECK(ms[i]->matched_text == c.sources[i]);
      prev_end = ms[i]->end_idx;
    }
    CHECK(prev_end == t.size());
  }
}

TEST_CASE("fallback stages") {
  std::mt19937_64 rng(9);
  AlignerConfig cfg;
  auto c = fixture::MakeOutOfOrderCase(rng, 10, 5);
  NormText t = Normalize(c.transcript);
  auto ms = AlignSession(fixture::ToSegments(c), t, cfg);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    REQUIRE(ms[i]);
    CHECK(ms[i]->stage == (i == 5 ? MatchStage::kCoarseGlobal : MatchStage::kCoarseSeq));
    CHECK(ms[i]->start_idx == c.truth[i].first);
  }

  auto n = fixture::MakeNoiseSegmentCase(rng, 10, 4);
  NormText tn = Normalize(n.transcript);
  ms = AlignSession(fixture::ToSegments(n), tn, cfg);
  REQUIRE(ms[4]);
  CHECK(ms[4]->stage == MatchStage::kDefaultMatch);
  CHECK_FALSE(ms[4]->accepted);
  CHECK(ms[4]->cer.ratio() > cfg.theta);
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (i != 4) CHECK(ms[i]->accepted);
}

TEST_CASE("unusable segments are carried through") {
  AlignerConfig cfg;
  NormText t = Normalize("one two three four five six seven eight");
  std::vector<AsrSegment> segs(3);
  segs[0].segment_id = "a";
  segs[0].asr_norm = Normalize("one two three");
  segs[1].segment_id = "b";
  segs[2].segment_id = "c";
  segs[2].asr_norm = Normalize("four five");
  auto ms = AlignSession(segs, t, cfg);
  REQUIRE(ms.size() == 3);
  CHECK(ms[0]->segment_id == "a");
  CHECK_FALSE(ms[1].has_value());
  CHECK(ms[2]->start_idx == 3);
  CHECK(ms[2]->stage == MatchStage::kCoarseSeq);
  CHECK(CodeOf([&] { AlignSession(segs, NormText{}, cfg); }) == ErrorCode::kEmptyTranscript);
}

TEST_CASE("align_session agrees with the exhaustive oracle") {
  std::mt19937_64 rng(2026);
  AlignerConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    fixture::AlignCaseOptions o;
    o.max_noise = 0.4;
    o.decoy_fraction = trial % 2 ? 0.2 : 0.0;
    auto c = fixture::MakeAlignCase(rng, o);
    NormText t = Normalize(c.transcript);
    auto segs = fixture::ToSegments(c);
    auto got = AlignSession(segs, t, cfg);
    CHECK(fixture::SameAsOracle(got, RunOracle(segs, t, cfg)));
    for (const auto &m : got) {
      REQUIRE(m);
      CHECK(m->accepted == (m->cer.ratio() <= cfg.theta));
      CHECK(m->matched_text == WindowText(t, m->start_idx, m->end_idx - m->start_idx));
    }
    CHECK(AlignSession(segs, t, cfg).size() == got.size());
  }
}

TEST_CASE("aligner config") {
  AlignerConfig cfg;
  auto back = AlignerConfig::FromJson(cfg.ToJson());
  CHECK(back.theta == cfg.theta);
  CHECK(back.k == 3);
  CHECK(back.margin_words == 15);
  CHECK(back.skip_stride_fraction == Ratio{1, 2});
  CHECK(CodeOf([] { AlignerConfig::FromJson({{"theta", 0}}); }) == ErrorCode::kConfigInvalid);
  CHECK(CodeOf([] { AlignerConfig::FromJson({{"k", 0}}); }) == ErrorCode::kConfigInvalid);
  CHECK(MatchStageFromName("default_match") == MatchStage::kDefaultMatch);
  CHECK(CodeOf([] { MatchStageFromName("x"); }) == ErrorCode::kSchemaError);
}
