// tests/fixtures/corpus_fixture.h

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

#ifndef LONGALIGN_TESTS_FIXTURES_CORPUS_FIXTURE_H_
#define LONGALIGN_TESTS_FIXTURES_CORPUS_FIXTURE_H_

// A small hermetic corpus on disk: synthetic recordings where tones stand in
// for speech, a scripted ASR adapter, planted transcripts in txt, srt and
// html, a decoy transcript, a links CSV and a pipeline config.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fixtures/align_fixtures.h"
#include "fixtures/synth_audio.h"
#include "fixtures/test_util.h"
#include "json.hpp"
#include "longalign/wav.h"

namespace fixture {

struct Corpus {
  std::filesystem::path root;
  std::filesystem::path config;
  std::filesystem::path work;
  std::map<std::string, std::size_t> segments;  // planted utterances per session
  std::map<std::string, std::string> planted;   // session -> transcript_id
  std::size_t total_segments = 0;
};

inline std::string SrtTime(double s) {
  long ms = std::lround(s * 1000);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02ld:%02ld:%02ld,%03ld", ms / 3600000, ms / 60000 % 60,
                ms / 1000 % 60, ms % 1000);
  return buf;
}

inline std::string Sentence(const std::string &words) {
  std::string s = words;
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

// Writes the corpus under root (wiped first). extra is merged into the
// config object.
inline Corpus MakeCorpus(const std::filesystem::path &root, unsigned seed = 7,
                         const nlohmann::json &extra = nlohmann::json::object()) {
  namespace fs = std::filesystem;
  fs::remove_all(root);
  fs::create_directories(root / "media");
  std::mt19937_64 rng(seed);
  Corpus c;
  c.root = root;
  c.work = root / "work";

  const std::vector<std::string> formats = {"txt", "srt", "html"};
  std::string csv =
      "session_id,video_id,media_url,transcript_id,transcript_url,transcript_format,language\n";
  for (int si = 0; si < 3; ++si) {
    const std::string sid = "sess" + std::to_string(si + 1);
    const std::size_t n = Uniform(rng, 4, 6);
    ::fixture::SignalBuilder audio(16000, 0.001f, seed + si);
    double t = 1.0;
    audio.Silence(1.0);
    std::string tsv, txt, srt, html = "<html><head><title>Record</title></head><body>\n";
    for (std::size_t u = 0; u < n; ++u) {
      const double dur = 4.0 + static_cast<double>(Uniform(rng, 0, 30)) / 10.0;
      const double gap = 1.5 + static_cast<double>(Uniform(rng, 0, 10)) / 10.0;
      const std::string words = RandomWords(rng, Uniform(rng, 8, 14));
      audio.Tone(dur, 180.0 + 20.0 * static_cast<double>(u)).Silence(gap);
      tsv += std::to_string(t) + "\t" + std::to_string(t + dur) + "\t" + words + "\n";
      const std::string decoy = DecoyPhrases()[Uniform(rng, 0, DecoyPhrases().size() - 1)];
      const bool with_decoy = u % 2 == 1;
      if (with_decoy) txt += decoy + "\n";
      txt += Sentence(words) + "\n";
      srt += std::to_string(u + 1) + "\n" + SrtTime(t) + " --> " + SrtTime(t + dur) + "\n" +
             (with_decoy ? decoy + " " : std::string()) + Sentence(words) + "\n\n";
      if (with_decoy) html += "<p><i>" + decoy + "</i></p>\n";
      html += "<p>" + Sentence(words) + "</p>\n";
      t += dur + gap;
    }
    html += "</body></html>\n";
    longalign::WriteWav(root / "media" / (sid + ".wav"), audio.Build());
    WriteText(root / "asr" / (sid + ".tsv"), tsv);
    const std::string fmt = formats[static_cast<std::size_t>(si)];
    const std::string body = fmt == "txt" ? txt : fmt == "srt" ? srt : html;
    const std::string tname = sid + "_official." + fmt;
    WriteText(root / "transcripts" / tname, body);
    const std::string media = si == 0 ? "file://" + (root / "media" / (sid + ".wav")).string()
                                      : "media/" + sid + ".wav";
    csv += sid + ",v" + std::to_string(si) + "," + media + ",official,transcripts/" + tname +
           "," + fmt + ",en\n";
    if (si == 0) {
      std::string decoy_text;
      for (std::size_t u = 0; u < n; ++u) decoy_text += Sentence(RandomWords(rng, 11)) + "\n";
      WriteText(root / "transcripts" / "sess1_other.txt", decoy_text);
      csv += sid + ",v0," + media + ",other,transcripts/sess1_other.txt,txt,en\n";
    }
    c.segments[sid] = n;
    c.planted[sid] = "official";
    c.total_segments += n;
  }
  WriteText(root / "links.csv", csv);

  nlohmann::json cfg = {
      {"links_csv", "links.csv"},
      {"work_dir", "work"},
      {"workers", 2},
      {"backoff_s", 0.01},
      {"adapters",
       {{"asr",
         {{"command", std::string(LONGALIGN_ECHO_ASR_PATH) + " " + (root / "asr").string() +
                          " {session_id} {audio}"},
          {"model_tag", "echo"}}}}},
      {"splits", {{"train", 0.34}, {"dev", 0.33}, {"test", 0.33}, {"seed", 11}}}};
  cfg.merge_patch(extra);
  c.config = WriteText(root / "config.json", cfg.dump(2));
  return c;
}

}  // namespace fixture

#endif  // LONGALIGN_TESTS_FIXTURES_CORPUS_FIXTURE_H_
