// src/pipeline.cc

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

#include "longalign/pipeline.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "longalign/aligner.h"
#include "longalign/asr_bridge.h"
#include "longalign/dataset_builder.h"
#include "longalign/error.h"
#include "longalign/fetch.h"
#include "longalign/hashing.h"
#include "longalign/links_csv.h"
#include "longalign/segmenter.h"
#include "longalign/selector.h"
#include "longalign/transcript_io.h"
#include "longalign/wav.h"

namespace longalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool IsPermanent(ErrorCode c) {
  switch (c) {
    case ErrorCode::kHandlerNotFound:
    case ErrorCode::kUnknownFormat:
    case ErrorCode::kSchemaError:
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kNoCandidates:
    case ErrorCode::kEmptyAudio:
      return true;
    default:
      return false;
  }
}

json ReadJson(const fs::path &p) {
  json j = json::parse(ReadFileBytes(p), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kSchemaError, p.string() + " is not valid JSON");
  return j;
}

std::string FileKey(const std::string &format) {
  std::string out;
  for (char c : format)
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
  return out.empty() ? "bin" : out;
}

std::string SafeName(const std::string &id) {
  std::string out;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void MaybeAbort(std::string_view point, std::ostream &log) {
  const char *env = std::getenv("LONGALIGN_ABORT_AFTER");
  if (env && point == env) {
    log.flush();
    ::_exit(137);
  }
}

std::vector<SpeechInterval> ReadIntervals(const fs::path &p) {
  json j = ReadJson(p);
  std::vector<SpeechInterval> out;
  for (const auto &e : j.at("intervals")) {
    SpeechInterval iv;
    iv.start_s = e.at("start_s").get<double>();
    iv.end_s = e.at("end_s").get<double>();
    iv.source = e.value("source", "") == "external" ? IntervalSource::kExternal
                                                    : IntervalSource::kEnergyVad;
    out.push_back(iv);
  }
  return out;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg, std::ostream &log, std::ostream &human)
    : cfg_(std::move(cfg)),
      store_(std::make_unique<FileJobStore>(cfg_.store_dir)),
      log_(log),
      human_(human) {}

fs::path Pipeline::ArtifactDir(const std::string &session_id, Stage stage) const {
  std::string key = session_id;
  key.push_back('\0');
  key += StageName(stage);
  return cfg_.work_dir / "artifacts" / std::string(StageName(stage)) /
         Sha256Hex(key).substr(0, 16);
}

void Pipeline::Log(const json &event) {
  json e = event;
  e["ts_ms"] = NowMs();
  std::lock_guard<std::mutex> lock(mu_);
  log_ << e.dump() << "\n";
  log_.flush();
}

std::size_t Pipeline::Ingest(const fs::path &links_csv) {
  std::vector<SessionRecord> sessions = LoadLinksCsv(links_csv);
  std::set<std::string> known;
  for (const auto &r : store_->List()) known.insert(r.session.session_id);
  std::size_t added = store_->Upsert(sessions);
  for (const auto &s : sessions)
    if (!known.count(s.session_id))
      Log({{"event", "transition"}, {"session_id", s.session_id}, {"stage", "ingest"},
           {"from", nullptr}, {"to", JobStateName(JobState::kPending)}});
  human_ << "ingest: " << sessions.size() << " sessions in " << links_csv.string() << ", "
         << added << " new\n";
  MaybeAbort("ingest", log_);
  return added;
}

StageReport Pipeline::RunStage(Stage stage, const RunOptions &opts) {
  store_->HealStale(NowMs());
  std::vector<JobRecord> jobs = store_->List();
  std::set<std::string> known;
  for (const auto &r : jobs) known.insert(r.session.session_id);
  for (const auto &id : opts.sessions)
    if (!known.count(id)) throw Error(ErrorCode::kConfigInvalid, "unknown session '" + id + "'");
  std::vector<std::string> early;
  const int need = StateRank(StageInput(stage));
  for (const auto &r : jobs) {
    if (!opts.sessions.empty() && !opts.sessions.count(r.session.session_id)) continue;
    if (r.state == JobState::kFailed) continue;
    if (StateRank(r.state) < need) early.push_back(r.session.session_id);
  }
  if (!early.empty()) {
    std::string list;
    for (const auto &id : early) list += (list.empty() ? "" : ",") + id;
    throw Error(ErrorCode::kStageOrderViolation,
                std::string(StageName(stage)) + " needs state " +
                    std::string(JobStateName(StageInput(stage))) + "; not there yet: " + list);
  }

  StageReport report = RunWorkers(stage, opts);
  if (stage == Stage::kEmit) WriteCorpusOutputs();
  return report;
}

void Pipeline::Worker(Stage stage, int index, const RunOptions &opts, StageReport &report) {
  FileJobStore store(cfg_.store_dir);
  const std::string owner =
      MakeLeaseOwner(std::string(StageName(stage)) + "-" + std::to_string(index));
  ClaimPolicy policy;
  policy.max_retries = cfg_.max_retries;
  policy.lease_ms = cfg_.lease_ms;
  policy.sessions = opts.sessions;
  const std::string stage_name(StageName(stage));

  for (;;) {
    std::optional<JobRecord> job = store.ClaimNext(stage, owner, policy, NowMs());
    if (!job) {
      // Wait out the backoff of sessions that still have retries left.
      int64_t now = NowMs();
      std::optional<int64_t> wake;
      for (const auto &r : store.List()) {
        if (!policy.sessions.empty() && !policy.sessions.count(r.session.session_id)) continue;
        if (r.state != JobState::kFailed || r.failed_stage != stage || r.permanent_failure ||
            r.attempts >= policy.max_retries || r.leased())
          continue;
        wake = std::min(wake.value_or(r.not_before_ms), r.not_before_ms);
      }
      if (!wake) return;
      int64_t wait = std::clamp<int64_t>(*wake - now, 1, 1000);
      std::this_thread::sleep_for(std::chrono::milliseconds(wait));
      continue;
    }
    const std::string &id = job->session.session_id;
    Log({{"event", "transition"}, {"session_id", id}, {"stage", stage_name},
         {"from", JobStateName(stage == Stage::kFetch && job->attempts > 1 ? JobState::kFailed
                                                                           : StageInput(stage))},
         {"to", JobStateName(job->state)}, {"attempt", job->attempts}});
    std::string reason;
    bool permanent = false;
    std::map<std::string, std::string> checksums;
    try {
      checksums = Execute(stage, *job);
    } catch (const Error &e) {
      reason = e.what();
      permanent = IsPermanent(e.code());
    } catch (const std::exception &e) {
      reason = e.what();
    }
    if (reason.empty()) {
      if (store.Complete(id, stage, owner, checksums)) {
        Log({{"event", "transition"}, {"session_id", id}, {"stage", stage_name},
             {"from", JobStateName(job->state)}, {"to", JobStateName(StageOutput(stage))},
             {"attempt", job->attempts}});
        {
          std::lock_guard<std::mutex> lock(mu_);
          ++report.completed;
        }
        MaybeAbort(stage_name, log_);
      }
      continue;
    }
    int64_t backoff = cfg_.backoff_ms << std::min(job->attempts - 1, 20);
    if (store.Fail(id, stage, owner, reason, permanent, NowMs() + backoff)) {
      const bool final = permanent || job->attempts >= cfg_.max_retries;
      Log({{"event", "transition"}, {"session_id", id}, {"stage", stage_name},
           {"from", JobStateName(job->state)}, {"to", JobStateName(JobState::kFailed)},
           {"attempt", job->attempts}, {"reason", reason}, {"final", final}});
      if (final) {
        std::lock_guard<std::mutex> lock(mu_);
        report.failed.emplace_back(id, reason);
      }
    }
  }
}

StageReport Pipeline::RunWorkers(Stage stage, const RunOptions &opts) {
  store_->HealStale(NowMs());
  StageReport report;
  report.stage = stage;
  std::vector<std::thread> threads;
  for (int w = 1; w < opts.workers; ++w)
    threads.emplace_back([&, w] { Worker(stage, w, opts, report); });
  Worker(stage, 0, opts, report);
  for (auto &t : threads) t.join();
  std::sort(report.failed.begin(), report.failed.end());
  human_ << StageName(stage) << ": " << report.completed << " completed, "
         << report.failed.size() << " failed\n";
  for (const auto &[id, why] : report.failed) human_ << "  " << id << ": " << why << "\n";
  return report;
}

std::vector<StageReport> Pipeline::RunAll(const RunOptions &opts) {
  std::vector<StageReport> reports;
  for (Stage s : AllStages()) reports.push_back(RunWorkers(s, opts));
  WriteCorpusOutputs();
  return reports;
}

std::map<std::string, std::string> Pipeline::Execute(Stage stage, const JobRecord &job) {
  switch (stage) {
    case Stage::kFetch: return DoFetch(job.session);
    case Stage::kSegment: return DoSegment(job.session);
    case Stage::kTranscribe: return DoTranscribe(job.session);
    case Stage::kAlign: return DoAlign(job.session);
    case Stage::kSelect: return DoSelect(job.session);
    case Stage::kEmit: return DoEmit(job.session);
  }
  return {};
}

std::map<std::string, std::string> Pipeline::DoFetch(const SessionRecord &s) {
  const fs::path dir = ArtifactDir(s.session_id, Stage::kFetch);
  fs::create_directories(dir);
  const FetchOptions opts = cfg_.Fetch();
  const fs::path media = dir / "media";
  if (!fs::exists(media)) FetchUrl(s.media_url, media, opts);
  const fs::path audio = dir / "audio.wav";
  ConvertToWav(media, audio, cfg_.convert_command, cfg_.stage_timeout);

  std::map<std::string, std::string> sums{{"fetch/media", Sha256File(media)},
                                          {"fetch/audio.wav", Sha256File(audio)}};
  json transcripts = json::array();
  for (std::size_t i = 0; i < s.transcripts.size(); ++i) {
    const TranscriptRef &t = s.transcripts[i];
    const std::string name = "t" + std::to_string(i) + "." + FileKey(t.format);
    if (!fs::exists(dir / name)) FetchUrl(t.url, dir / name, opts);
    std::string sha = Sha256File(dir / name);
    sums["fetch/" + name] = sha;
    transcripts.push_back({{"transcript_id", t.transcript_id},
                           {"format", t.format},
                           {"file", name},
                           {"sha256", sha}});
  }
  WriteJsonFile(dir / "fetch.json", {{"session_id", s.session_id},
                                     {"media_sha256", sums["fetch/media"]},
                                     {"audio_sha256", sums["fetch/audio.wav"]},
                                     {"transcripts", transcripts}});
  return sums;
}

std::map<std::string, std::string> Pipeline::DoSegment(const SessionRecord &s) {
  const fs::path audio_path = ArtifactDir(s.session_id, Stage::kFetch) / "audio.wav";
  Audio audio = ReadWav(audio_path);
  std::vector<SpeechInterval> intervals;
  json warnings = json::array();
  if (!cfg_.vad_command.empty()) {
    AdapterIntervals got = RunVadAdapter(audio_path, cfg_.vad_command, cfg_.stage_timeout);
    for (const auto &w : got.warnings) warnings.push_back(w);
    FrameEnergies fe = ComputeFrameEnergies(audio, cfg_.segmenter);
    intervals = EnforceDuration(std::move(got.intervals), cfg_.segmenter, &fe);
  } else {
    intervals = SegmentAudio(audio, cfg_.segmenter);
  }
  json list = json::array();
  for (const auto &iv : intervals)
    list.push_back({{"start_s", iv.start_s},
                    {"end_s", iv.end_s},
                    {"source", iv.source == IntervalSource::kExternal ? "external" : "energy_vad"}});
  const fs::path out = ArtifactDir(s.session_id, Stage::kSegment) / "intervals.json";
  WriteJsonFile(out, {{"session_id", s.session_id},
                      {"intervals", list},
                      {"warnings", warnings},
                      {"segmenter_config", cfg_.segmenter.ToJson()}});
  return {{"segment/intervals.json", Sha256File(out)}};
}

std::map<std::string, std::string> Pipeline::DoTranscribe(const SessionRecord &s) {
  const fs::path audio_path = ArtifactDir(s.session_id, Stage::kFetch) / "audio.wav";
  std::vector<SpeechInterval> intervals =
      ReadIntervals(ArtifactDir(s.session_id, Stage::kSegment) / "intervals.json");
  std::vector<AsrSegment> segments;
  const fs::path pre = cfg_.precomputed_asr_dir.empty()
                           ? fs::path()
                           : cfg_.precomputed_asr_dir / (s.session_id + ".jsonl");
  if (!pre.empty() && fs::exists(pre)) {
    segments = LoadPrecomputed(pre, cfg_.segmenter, cfg_.norm);
  } else if (cfg_.asr) {
    AsrAdapter adapter = *cfg_.asr;
    adapter.timeout = cfg_.stage_timeout;
    AsrResult r = TranscribeViaAdapter(audio_path, intervals, adapter, s.session_id, cfg_.norm);
    for (const auto &w : r.warnings) Log({{"event", "warning"}, {"session_id", s.session_id},
                                          {"stage", "transcribe"}, {"message", w}});
    segments = std::move(r.segments);
  } else {
    throw Error(ErrorCode::kAdapterFailed, "no precomputed ASR for " + s.session_id);
  }
  const fs::path out = ArtifactDir(s.session_id, Stage::kTranscribe) / "asr.jsonl";
  WriteTextFile(out, SerializePrecomputed(segments));
  return {{"transcribe/asr.jsonl", Sha256File(out)}};
}

std::map<std::string, std::string> Pipeline::DoAlign(const SessionRecord &s) {
  const fs::path fetch_dir = ArtifactDir(s.session_id, Stage::kFetch);
  const fs::path dir = ArtifactDir(s.session_id, Stage::kAlign);
  std::vector<AsrSegment> segments = LoadPrecomputed(
      ArtifactDir(s.session_id, Stage::kTranscribe) / "asr.jsonl", cfg_.segmenter, cfg_.norm);
  json fetched = ReadJson(fetch_dir / "fetch.json");
  const ParserRegistry registry = cfg_.Registry();
  json pairs = json::array();
  json warnings = json::array();
  std::map<std::string, std::string> sums;
  for (std::size_t i = 0; i < fetched.at("transcripts").size(); ++i) {
    const json &t = fetched["transcripts"][i];
    const std::string tid = t.at("transcript_id").get<std::string>();
    const std::string fmt = t.at("format").get<std::string>();
    try {
      TranscriptDocument doc = LoadTranscript(tid, fmt, fetch_dir / t.at("file").get<std::string>(),
                                              registry, cfg_.norm, cfg_.llm);
      if (doc.norm.empty()) throw Error(ErrorCode::kEmptyTranscript, "normalizes to nothing");
      PairAlignment pair{tid, fmt, AlignSession(segments, doc.norm, cfg_.aligner)};
      const std::string base = std::to_string(i);
      WriteJsonFile(dir / ("alignment." + base + ".json"),
                    AlignmentFileJson(s.session_id, pair, segments));
      WriteTextFile(dir / ("transcript." + base + ".txt"), doc.raw_text);
      sums["align/alignment." + base + ".json"] = Sha256File(dir / ("alignment." + base + ".json"));
      json entry = {{"index", i},
                    {"transcript_id", tid},
                    {"format", fmt},
                    {"cleaning", doc.cleaning == Cleaning::kLlm ? "llm" : "none"},
                    {"prompt_version", doc.prompt_version},
                    {"extractor", doc.extractor},
                    {"warnings", doc.warnings}};
      pairs.push_back(entry);
    } catch (const Error &e) {
      std::string w = tid + "." + fmt + ": " + e.what();
      warnings.push_back(w);
      Log({{"event", "warning"}, {"session_id", s.session_id}, {"stage", "align"}, {"message", w}});
    }
  }
  if (pairs.empty()) {
    std::string why;
    for (const auto &w : warnings) why += (why.empty() ? "" : "; ") + w.get<std::string>();
    throw Error(ErrorCode::kNoCandidates, "no transcript could be aligned" +
                                              (why.empty() ? std::string() : ": " + why));
  }
  WriteJsonFile(dir / "pairs.json", {{"session_id", s.session_id},
                                     {"pairs", pairs},
                                     {"warnings", warnings},
                                     {"aligner_config", cfg_.aligner.ToJson()}});
  sums["align/pairs.json"] = Sha256File(dir / "pairs.json");
  return sums;
}

std::map<std::string, std::string> Pipeline::DoSelect(const SessionRecord &s) {
  const fs::path align_dir = ArtifactDir(s.session_id, Stage::kAlign);
  std::vector<AsrSegment> segments = LoadPrecomputed(
      ArtifactDir(s.session_id, Stage::kTranscribe) / "asr.jsonl", cfg_.segmenter, cfg_.norm);
  json pairs = ReadJson(align_dir / "pairs.json").at("pairs");
  std::vector<PairSummary> summaries;
  json listed = json::array();
  for (const auto &p : pairs) {
    const std::string base = std::to_string(p.at("index").get<std::size_t>());
    PairAlignment pa = PairAlignmentFromJson(ReadJson(align_dir / ("alignment." + base + ".json")));
    summaries.push_back(SummarizePair(segments, pa));
    json e = summaries.back().ToJson();
    e["index"] = p["index"];
    listed.push_back(e);
  }
  std::vector<PairSummary> selected = SelectPairs(summaries, cfg_.selection);
  json sel = json::array();
  for (const auto &p : selected)
    sel.push_back({{"transcript_id", p.transcript_id}, {"format", p.format}});
  const fs::path out = ArtifactDir(s.session_id, Stage::kSelect) / "selection.json";
  WriteJsonFile(out, {{"session_id", s.session_id},
                      {"pairs", listed},
                      {"selected", sel},
                      {"selection_criteria", cfg_.selection.ToJson()}});
  return {{"select/selection.json", Sha256File(out)}};
}

std::map<std::string, std::string> Pipeline::DoEmit(const SessionRecord &s) {
  const fs::path fetch_dir = ArtifactDir(s.session_id, Stage::kFetch);
  const fs::path align_dir = ArtifactDir(s.session_id, Stage::kAlign);
  std::vector<AsrSegment> segments = LoadPrecomputed(
      ArtifactDir(s.session_id, Stage::kTranscribe) / "asr.jsonl", cfg_.segmenter, cfg_.norm);
  json selection = ReadJson(ArtifactDir(s.session_id, Stage::kSelect) / "selection.json");

  std::vector<PairSummary> summaries;
  std::map<std::string, std::size_t> index_of;
  for (const auto &p : selection.at("pairs")) {
    summaries.push_back(PairSummary::FromJson(p));
    index_of[PairKey(summaries.back().transcript_id, summaries.back().format)] =
        p.at("index").get<std::size_t>();
  }
  std::vector<PairSummary> selected;
  std::vector<PairAlignment> alignments;
  std::vector<std::string> raws;
  std::vector<NormText> norms;
  for (const auto &p : selection.at("selected")) {
    const std::string key = PairKey(p.at("transcript_id"), p.at("format"));
    const std::size_t idx = index_of.at(key);
    for (const auto &sum : summaries)
      if (PairKey(sum.transcript_id, sum.format) == key) selected.push_back(sum);
    const std::string base = std::to_string(idx);
    alignments.push_back(
        PairAlignmentFromJson(ReadJson(align_dir / ("alignment." + base + ".json"))));
    raws.push_back(ReadFileBytes(align_dir / ("transcript." + base + ".txt")));
  }
  for (const auto &raw : raws) norms.push_back(Normalize(raw, cfg_.norm));
  std::vector<const PairAlignment *> ptrs;
  std::map<std::string, TranscriptText> texts;
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    ptrs.push_back(&alignments[i]);
    texts[PairKey(alignments[i].transcript_id, alignments[i].format)] = {&raws[i], &norms[i]};
  }

  TierStats tiers = ComputeTierStats(segments, ptrs, cfg_.tiers);
  std::size_t usable = 0;
  for (const auto &seg : segments) usable += seg.usable();
  SummaryContext ctx{cfg_.norm.ToJson(), cfg_.aligner.ToJson(), cfg_.segmenter.ToJson(),
                     cfg_.selection.ToJson(),
                     segments.empty() ? (cfg_.asr ? cfg_.asr->model_tag : std::string())
                                      : segments.front().asr_model_tag};
  const fs::path out = OutputDir() / SafeName(s.session_id);
  EmitSessionSummary(out / "summary.json", SessionSummaryJson(s, segments.size(), usable,
                                                              summaries, selected, tiers, ctx));
  std::map<std::string, std::string> sums{{"emit/summary.json", Sha256File(out / "summary.json")}};
  for (const auto &pa : alignments) {
    const std::string name = "alignment." + PairKey(pa.transcript_id, pa.format) + ".json";
    EmitAlignmentFile(out / name, AlignmentFileJson(s.session_id, pa, segments));
    sums["emit/" + name] = Sha256File(out / name);
  }

  const std::string audio_rel =
      (fetch_dir / "audio.wav").lexically_relative(cfg_.work_dir).generic_string();
  std::string rows;
  for (const auto &row :
       BuildManifestRows(s, audio_rel, segments, ptrs, texts, cfg_.manifest_max_cer))
    rows += row.ToJsonLine("");
  const fs::path dir = ArtifactDir(s.session_id, Stage::kEmit);
  WriteTextFile(dir / "rows.jsonl", rows);
  WriteJsonFile(dir / "tier_stats.json", {{"language", s.language}, {"tier_stats", tiers.ToJson()}});
  sums["emit/rows.jsonl"] = Sha256File(dir / "rows.jsonl");
  return sums;
}

json Pipeline::Splits() {
  std::vector<std::string> ids;
  for (const auto &r : store_->List())
    if (r.state == JobState::kEmitted) ids.push_back(r.session.session_id);
  std::sort(ids.begin(), ids.end());
  json out = json::object();
  for (const auto &[id, split] : AssignSplits(ids, cfg_.splits, cfg_.split_seed))
    out[id] = SplitName(split);
  return out;
}

json Pipeline::Stats() {
  std::vector<std::pair<std::string, TierStats>> per;
  std::map<std::string, std::size_t> states;
  for (const auto &r : store_->List()) {
    ++states[std::string(JobStateName(r.state))];
    if (r.state != JobState::kEmitted) continue;
    json t = ReadJson(ArtifactDir(r.session.session_id, Stage::kEmit) / "tier_stats.json");
    per.emplace_back(r.session.language, TierStats::FromJson(t.at("tier_stats")));
  }
  return {{"languages", CorpusStatsJson(CorpusStats(per))}, {"job_states", states}};
}

void Pipeline::WriteCorpusOutputs() {
  std::vector<JobRecord> jobs = store_->List();
  std::sort(jobs.begin(), jobs.end(), [](const JobRecord &a, const JobRecord &b) {
    return a.session.session_id < b.session.session_id;
  });
  json splits = Splits();
  std::string manifest;
  std::vector<std::pair<std::string, TierStats>> per;
  std::size_t rows = 0;
  for (const auto &r : jobs) {
    if (r.state != JobState::kEmitted) continue;
    const fs::path dir = ArtifactDir(r.session.session_id, Stage::kEmit);
    std::istringstream in(ReadFileBytes(dir / "rows.jsonl"));
    const std::string split = splits.at(r.session.session_id).get<std::string>();
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      auto j = nlohmann::ordered_json::parse(line);
      j["split"] = split;
      manifest += j.dump() + "\n";
      ++rows;
    }
    json t = ReadJson(dir / "tier_stats.json");
    per.emplace_back(r.session.language, TierStats::FromJson(t.at("tier_stats")));
  }
  WriteTextFile(OutputDir() / "manifest.jsonl", manifest);
  WriteJsonFile(OutputDir() / "stats.json", CorpusStatsJson(CorpusStats(per)));
  WriteJsonFile(OutputDir() / "splits.json", splits);
  human_ << "corpus: " << splits.size() << " sessions, " << rows << " manifest rows in "
         << (OutputDir() / "manifest.jsonl").string() << "\n";
}

int ExitCode(const std::vector<StageReport> &reports) {
  for (const auto &r : reports)
    if (!r.failed.empty()) return 1;
  return 0;
}

}  // namespace longalign
