// tests/test_segmenter.cc

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

#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures/synth_audio.h"
#include "longalign/error.h"
#include "longalign/segmenter.h"

using namespace longalign;

namespace {

// Frame boundary oracle: a tone covering [a, b) lights every frame that
// overlaps it.
std::pair<double, double> ExpectedSpan(double a, double b, double frame_s) {
  double start = std::floor(a / frame_s + 1e-9) * frame_s;
  double end = std::ceil(b / frame_s - 1e-9) * frame_s;
  return {start, end};
}

}  // namespace

TEST_CASE("detect_speech on silence") {
  SegmenterConfig cfg;
  Audio silence = fixture::SignalBuilder().Silence(2.0).Build();
  CHECK(DetectSpeech(silence, cfg).empty());
  Audio noisy = fixture::SignalBuilder(16000, 0.001f).Silence(2.0).Build();
  CHECK(DetectSpeech(noisy, cfg).empty());
}

TEST_CASE("detect_speech finds a tone between silences") {
  SegmenterConfig cfg;
  Audio a = fixture::SignalBuilder().Silence(1.0).Tone(5.0).Silence(1.0).Build();
  auto iv = DetectSpeech(a, cfg);
  REQUIRE(iv.size() == 1);
  auto [s, e] = ExpectedSpan(1.0, 6.0, 0.03);
  CHECK(iv[0].start_s == doctest::Approx(s).epsilon(1e-9));
  CHECK(iv[0].end_s == doctest::Approx(e).epsilon(1e-9));
  CHECK(std::abs(iv[0].start_s - 1.0) <= 0.03);
  CHECK(std::abs(iv[0].end_s - 6.0) <= 0.03);
  CHECK(iv[0].source == IntervalSource::kEnergyVad);
}

TEST_CASE("detect_speech merges short gaps") {
  SegmenterConfig cfg;
  cfg.min_gap_ms = 300;
  Audio a = fixture::SignalBuilder()
                .Silence(1.0).Tone(2.0).Silence(0.1).Tone(2.0).Silence(1.0).Build();
  auto iv = DetectSpeech(a, cfg);
  REQUIRE(iv.size() == 1);
  auto [s, e] = ExpectedSpan(1.0, 5.1, 0.03);
  CHECK(iv[0].start_s == doctest::Approx(s));
  CHECK(iv[0].end_s == doctest::Approx(e));

  Audio wide = fixture::SignalBuilder()
                   .Silence(1.0).Tone(2.0).Silence(0.6).Tone(2.0).Silence(1.0).Build();
  CHECK(DetectSpeech(wide, cfg).size() == 2);
}

TEST_CASE("detect_speech errors and determinism") {
  SegmenterConfig cfg;
  try {
    DetectSpeech(Audio{}, cfg);
    FAIL("expected EmptyAudio");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyAudio);
  }
  Audio low = fixture::SignalBuilder(4000).Tone(1.0).Build();
  CHECK_THROWS_AS(DetectSpeech(low, cfg), Error);
  Audio a = fixture::SignalBuilder(16000, 0.002f, 5).Silence(1).Tone(3).Silence(1).Build();
  auto x = DetectSpeech(a, cfg), y = DetectSpeech(a, cfg);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].start_s == y[i].start_s);
    CHECK(x[i].end_s == y[i].end_s);
  }
}

TEST_CASE("enforce_duration splits at the energy minimum of the middle third") {
  SegmenterConfig cfg;
  // 25 s of "speech" with a quiet dip at 12.0 s
  Audio a = fixture::SignalBuilder()
                .Tone(12.0, 220, 0.5f).Tone(0.09, 220, 0.05f).Tone(12.91, 220, 0.5f).Build();
  FrameEnergies fe = ComputeFrameEnergies(a, cfg);
  // oracle: argmin over frames starting inside [25/3, 50/3]
  std::size_t best = 0;
  for (std::size_t f = 0; f < fe.db.size(); ++f) {
    double t = static_cast<double>(f) * fe.frame_s;
    if (t + 1e-9 < 25.0 / 3 || t - 1e-9 > 50.0 / 3) continue;
    if (best == 0 || fe.db[f] < fe.db[best]) best = f;
  }
  double expect = static_cast<double>(best) * fe.frame_s;
  auto out = EnforceDuration({{0.0, 25.0, IntervalSource::kEnergyVad}}, cfg, &fe);
  REQUIRE(out.size() == 2);
  CHECK(out[0].start_s == 0.0);
  CHECK(out[0].end_s == doctest::Approx(expect));
  CHECK(out[1].start_s == doctest::Approx(expect));
  CHECK(out[1].end_s == 25.0);
  CHECK(expect >= 25.0 / 3);
  CHECK(expect <= 50.0 / 3);
  CHECK(expect == doctest::Approx(12.0).epsilon(0.01));

  auto mid = EnforceDuration({{0.0, 25.0, IntervalSource::kEnergyVad}}, cfg, nullptr);
  REQUIRE(mid.size() == 2);
  CHECK(mid[0].end_s == doctest::Approx(12.5));
}

TEST_CASE("enforce_duration keeps, merges and drops") {
  SegmenterConfig cfg;
  auto same = EnforceDuration({{0.0, 10.0}}, cfg);
  REQUIRE(same.size() == 1);
  CHECK(same[0].end_s == 10.0);
  CHECK(EnforceDuration({{0.0, 1.0}}, cfg).empty());
  // short utterance close to a neighbour is merged
  auto merged = EnforceDuration({{0.0, 5.0}, {5.5, 6.5}}, cfg);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].end_s == 6.5);
  // too far away: dropped
  auto far = EnforceDuration({{0.0, 5.0}, {8.0, 9.0}}, cfg);
  REQUIRE(far.size() == 1);
  CHECK(far[0].end_s == 5.0);
  // merging would exceed max_len_s: dropped
  auto full = EnforceDuration({{0.0, 19.5}, {19.8, 21.0}}, cfg);
  REQUIRE(full.size() == 1);
  CHECK(full[0].end_s == 19.5);
  // two shorts merge into one valid utterance
  auto pair = EnforceDuration({{0.0, 2.0}, {2.4, 4.0}}, cfg);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].duration() == doctest::Approx(4.0));
}

TEST_CASE("enforce_duration bounds and coverage on random intervals") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> len(0.2, 70.0), gap(0.05, 3.0);
  SegmenterConfig cfg;
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<SpeechInterval> in;
    double t = gap(rng);
    int n = 1 + iter % 12;
    for (int i = 0; i < n; ++i) {
      double d = len(rng);
      in.push_back({t, t + d});
      t += d + gap(rng);
    }
    auto out = EnforceDuration(in, cfg);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i].duration() >= cfg.min_len_s - 1e-9);
      CHECK(out[i].duration() <= cfg.max_len_s + 1e-9);
      if (i) CHECK(out[i].start_s >= out[i - 1].end_s - 1e-12);
      // every output lies within input speech plus gaps of at most
      // max_merge_gap_ms that it bridged
      double covered = 0;
      for (const auto &s : in) {
        double lo = std::max(s.start_s, out[i].start_s), hi = std::min(s.end_s, out[i].end_s);
        if (hi > lo) covered += hi - lo;
      }
      CHECK(covered > 0);
    }
    for (const auto &o : out) {
      bool inside_input_hull = o.start_s >= in.front().start_s - 1e-9 &&
                               o.end_s <= in.back().end_s + 1e-9;
      CHECK(inside_input_hull);
    }
  }
}

TEST_CASE("vad adapter output parsing") {
  auto two = ParseVadAdapterOutput("0.0\t4.2\n5.0\t9.9\n");
  REQUIRE(two.intervals.size() == 2);
  CHECK(two.intervals[1].start_s == 5.0);
  CHECK(two.intervals[0].source == IntervalSource::kExternal);
  CHECK(two.warnings.empty());

  auto sorted = ParseVadAdapterOutput("5.0\t9.9\n0.0\t4.2\n");
  REQUIRE(sorted.intervals.size() == 2);
  CHECK(sorted.intervals[0].start_s == 0.0);
  CHECK(sorted.warnings.size() == 1);

  auto overlap = ParseVadAdapterOutput("0\t5\n4\t8\n");
  REQUIRE(overlap.intervals.size() == 1);
  CHECK(overlap.intervals[0].end_s == 8.0);
  CHECK(overlap.warnings.size() == 1);

  for (const char *bad : {"abc\n", "1.0\n", "3\t2\n", "1\t2\t3\n", "-1\t2\n"}) {
    CAPTURE(bad);
    try {
      ParseVadAdapterOutput(bad);
      FAIL("expected MalformedAdapterOutput");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kMalformedAdapterOutput);
    }
  }
}

TEST_CASE("vad adapter subprocess") {
  auto r = RunVadAdapter("/tmp/x.wav", "printf '0.0\\t4.2\\n5.0\\t9.9\\n' #",
                         std::chrono::seconds(5));
  CHECK(r.intervals.size() == 2);
  try {
    RunVadAdapter("/tmp/x.wav", "exit 2 #", std::chrono::seconds(5));
    FAIL("expected AdapterFailed");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kAdapterFailed);
  }
}

TEST_CASE("wav round trip") {
  Audio a = fixture::SignalBuilder().Silence(0.1).Tone(0.2).Build();
  auto path = std::filesystem::temp_directory_path() / "la_seg_roundtrip.wav";
  WriteWav(path, a);
  Audio b = ReadWav(path);
  CHECK(b.sample_rate == 16000);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); i += 97)
    CHECK(b.samples[i] == doctest::Approx(a.samples[i]).epsilon(1e-3));
  CHECK_THROWS_AS(ParseWav("RIFFxxxxWAVE"), Error);
  CHECK_THROWS_AS(ParseWav("not a wav"), Error);
}
