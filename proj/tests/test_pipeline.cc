// tests/test_pipeline.cc

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

#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures/corpus_fixture.h"
#include "fixtures/test_util.h"
#include "longalign/config.h"
#include "longalign/error.h"
#include "longalign/job_store.h"
#include "longalign/subprocess.h"
#include "longalign/transcript_io.h"

using namespace longalign;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ProcessResult Cli(const fixture::Corpus &c, const std::string &args, const std::string &env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(LONGALIGN_CLI_PATH) +
                    " --config " + ShellQuote(c.config.string()) + " " + args;
  return RunCommand(cmd, "", std::chrono::minutes(2));
}

std::vector<json> JsonLines(const std::string &text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string Manifest(const fixture::Corpus &c) {
  return ReadFileBytes(c.work / "output" / "manifest.jsonl");
}

}  // namespace

TEST_CASE("run-all on the fixture corpus") {
  auto c = fixture::MakeCorpus(fixture::ScratchDir("cli_runall") / "corpus");
  auto r = Cli(c, "run-all");
  INFO(r.err);
  REQUIRE(r.exit_code == 0);

  auto rows = JsonLines(Manifest(c));
  CHECK(rows.size() == c.total_segments);
  std::map<std::string, std::size_t> per;
  for (const auto &row : rows) {
    CHECK(row["cer"] == "0.000000");
    ++per[row["segment_id"].get<std::string>().substr(0, 5)];
    CHECK(fs::exists(c.work / row["audio_path"].get<std::string>()));
  }
  for (const auto &[sid, n] : c.segments) CHECK(per[sid] == n);

  json summary = json::parse(ReadFileBytes(c.work / "output" / "sess1" / "summary.json"));
  REQUIRE(summary["selected"].is_array());
  CHECK(summary["selected"].size() == 1);
  CHECK(summary["selected"][0]["transcript_id"] == "official");
  CHECK(fs::exists(c.work / "output" / "sess1" / "alignment.official.txt.json"));
  CHECK_FALSE(fs::exists(c.work / "output" / "sess1" / "alignment.other.txt.json"));

  // one JSON line per transition: 6 stages, claim and completion each
  std::size_t transitions = 0;
  for (const auto &e : JsonLines(r.out)) transitions += e["event"] == "transition";
  CHECK(transitions == 3 + 3 * 6 * 2);

  auto splits = json::parse(ReadFileBytes(c.work / "output" / "splits.json"));
  CHECK(splits.size() == 3);
  std::set<std::string> names;
  for (const auto &[id, s] : splits.items()) names.insert(s.get<std::string>());
  CHECK(names.size() == 3);

  auto stats = Cli(c, "stats");
  CHECK(stats.exit_code == 0);
  auto sj = json::parse(stats.out);
  CHECK(sj["languages"].contains("en"));
  CHECK(sj["job_states"]["emitted"] == 3);

  // a second run finds nothing to do and rewrites identical outputs
  std::string before = Manifest(c);
  CHECK(Cli(c, "run-all").exit_code == 0);
  CHECK(Manifest(c) == before);
}

TEST_CASE("stage by stage equals run-all") {
  auto a = fixture::MakeCorpus(fixture::ScratchDir("cli_stages") / "a");
  auto b = fixture::MakeCorpus(fixture::ScratchDir("cli_stages") / "b");
  REQUIRE(Cli(a, "run-all").exit_code == 0);
  REQUIRE(Cli(b, "ingest").exit_code == 0);
  for (const char *stage : {"fetch", "segment", "transcribe", "align", "select", "emit"}) {
    auto r = Cli(b, stage, "");
    INFO(stage << ": " << r.err);
    REQUIRE(r.exit_code == 0);
  }
  CHECK(Manifest(a) == Manifest(b));
  CHECK(ReadFileBytes(a.work / "output" / "stats.json") ==
        ReadFileBytes(b.work / "output" / "stats.json"));
}

TEST_CASE("stage order, config and usage errors") {
  auto c = fixture::MakeCorpus(fixture::ScratchDir("cli_errors") / "corpus");
  auto stats = Cli(c, "stats");
  CHECK(stats.exit_code == 0);
  CHECK(json::parse(stats.out)["languages"].empty());

  REQUIRE(Cli(c, "ingest").exit_code == 0);
  REQUIRE(Cli(c, "fetch --workers 1").exit_code == 0);
  auto early = Cli(c, "align");
  CHECK(early.exit_code == 3);
  CHECK(early.err.find("not there yet") != std::string::npos);
  CHECK(Cli(c, "segment --sessions sess2").exit_code == 0);
  CHECK(Cli(c, "transcribe --sessions sess2").exit_code == 0);
  CHECK(Cli(c, "align --sessions sess2").exit_code == 0);
  CHECK(Cli(c, "align --sessions sess1").exit_code == 3);
  CHECK(Cli(c, "align --sessions nosuch").exit_code == 2);

  CHECK(Cli(c, "bogus").exit_code == 2);
  CHECK(Cli(c, "fetch --workers 0").exit_code == 2);
  auto bad = fixture::MakeCorpus(fixture::ScratchDir("cli_errors") / "bad", 7,
                                 {{"adapters", {{"asr", {{"command", "/nonexistent/asr"}}}}}});
  CHECK(Cli(bad, "run-all").exit_code == 2);
  auto bad2 = fixture::MakeCorpus(fixture::ScratchDir("cli_errors") / "bad2", 7,
                                  {{"aligner", {{"theta", 1.5}}}});
  CHECK(Cli(bad2, "stats").exit_code == 2);
  fixture::WriteText(bad2.config, "{ not json");
  CHECK(Cli(bad2, "stats").exit_code == 2);
}

TEST_CASE("a failing session does not stop the others") {
  auto c = fixture::MakeCorpus(fixture::ScratchDir("cli_partial") / "corpus");
  {
    std::string csv = ReadFileBytes(c.root / "links.csv");
    csv += "sess9,v9,ftp://example.invalid/a.wav,official,transcripts/sess1_official.txt,txt,en\n";
    csv += "sess8,v8,media/missing.wav,official,transcripts/sess1_official.txt,txt,en\n";
    fixture::WriteText(c.root / "links.csv", csv);
  }
  auto r = Cli(c, "run-all");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("sess9") != std::string::npos);
  CHECK(JsonLines(Manifest(c)).size() == c.total_segments);

  FileJobStore store(c.work / "store");
  auto s9 = store.Get("sess9");
  CHECK(s9->state == JobState::kFailed);
  CHECK(s9->permanent_failure);
  CHECK(s9->attempts == 1);
  auto s8 = store.Get("sess8");
  CHECK(s8->state == JobState::kFailed);
  CHECK(s8->attempts == 3);

  // nothing new fails on a rerun
  CHECK(Cli(c, "run-all").exit_code == 0);
}

TEST_CASE("store path override") {
  auto c = fixture::MakeCorpus(fixture::ScratchDir("cli_store") / "corpus");
  auto alt = c.root / "elsewhere";
  CHECK(Cli(c, "ingest", "LONGALIGN_STORE=" + alt.string()).exit_code == 0);
  CHECK(fs::exists(alt / "jobs.json"));
  CHECK_FALSE(fs::exists(c.work / "store" / "jobs.json"));
}

TEST_CASE("config loading") {
  auto dir = fixture::ScratchDir("config");
  auto path = fixture::WriteText(dir / "c.json", R"({
    "work_dir": "w", "precomputed_asr_dir": "asr",
    "tiers": [0.3, 0.2, 0.1], "selection": {"kind": "all_below", "threshold": 0.25},
    "adapters": {"fetch_handlers": [{"pattern": "^rtmp://", "command": "cp {url} {out}"}]}})");
  PipelineConfig cfg = LoadConfig(path);
  CHECK(cfg.work_dir == (dir / "w").lexically_normal());
  CHECK(cfg.store_dir == (dir / "w" / "store").lexically_normal());
  CHECK(cfg.precomputed_asr_dir == (dir / "asr").lexically_normal());
  CHECK(cfg.selection.kind == SelectionCriteria::Kind::kAllBelow);
  CHECK(cfg.fetch_handlers.size() == 1);

  auto code = [&](const std::string &text) {
    return fixture::CodeOf([&] { LoadConfig(fixture::WriteText(dir / "x.json", text)); });
  };
  CHECK(code(R"({"work_dir": "w"})") == ErrorCode::kConfigInvalid);
  CHECK(code(R"({"precomputed_asr_dir": "a", "tiers": [0.1, 0.2]})") == ErrorCode::kConfigInvalid);
  CHECK(code(R"({"precomputed_asr_dir": "a", "workers": "two"})") == ErrorCode::kConfigInvalid);
  CHECK(code(R"({"precomputed_asr_dir": "a", "splits": {"train": 0.5}})") ==
        ErrorCode::kConfigInvalid);
  CHECK(code(R"({"precomputed_asr_dir": "a",
                 "adapters": {"fetch_handlers": [{"pattern": "(", "command": "cp"}]}})") ==
        ErrorCode::kConfigInvalid);
  CHECK(code(R"({"precomputed_asr_dir": "a", "adapters": {"vad": "no_such_program_x"}})") ==
        ErrorCode::kConfigInvalid);
}
