// src/config.cc

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

#include "longalign/config.h"

#include <cstdlib>

#include "longalign/error.h"
#include "longalign/subprocess.h"

namespace longalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void Invalid(const std::string &what) {
  throw Error(ErrorCode::kConfigInvalid, what);
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  if (p.empty()) return {};
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

Ratio RatioIn01(const json &v, const std::string &name) {
  if (!v.is_number()) Invalid(name + " must be a number");
  Ratio r = Ratio::FromDouble(v.get<double>());
  if (r < Ratio{0, 1} || r > Ratio{1, 1}) Invalid(name + " must be in [0, 1]");
  return r;
}

std::chrono::milliseconds Seconds(const json &v, const std::string &name) {
  if (!v.is_number() || v.get<double>() <= 0) Invalid(name + " must be positive seconds");
  return std::chrono::milliseconds(static_cast<int64_t>(v.get<double>() * 1000.0));
}

void CheckCommand(const std::string &cmd, const std::string &what) {
  if (cmd.empty()) return;
  std::string prog = CommandProgram(cmd);
  if (!ProgramResolvable(prog))
    Invalid(what + " command '" + prog + "' is not resolvable");
}

PipelineConfig ParseUnchecked(const json &j, const fs::path &base) {
  if (!j.is_object()) Invalid("config must be a JSON object");
  PipelineConfig c;
  c.links_csv = Resolve(base, j.value("links_csv", std::string()));
  c.work_dir = Resolve(base, j.value("work_dir", std::string("work")));
  c.store_dir = Resolve(base, j.value("store", std::string()));
  if (c.store_dir.empty()) c.store_dir = c.work_dir / "store";
  c.workers = j.value("workers", c.workers);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.lease_ms = static_cast<int64_t>(j.value("lease_s", c.lease_ms / 1000.0) * 1000.0);
  c.backoff_ms = static_cast<int64_t>(j.value("backoff_s", c.backoff_ms / 1000.0) * 1000.0);
  if (j.contains("stage_timeout_s")) c.stage_timeout = Seconds(j["stage_timeout_s"], "stage_timeout_s");

  if (j.contains("norm_profile")) c.norm = NormProfile::FromJson(j["norm_profile"]);
  if (j.contains("segmenter")) c.segmenter = SegmenterConfig::FromJson(j["segmenter"]);
  if (j.contains("aligner")) c.aligner = AlignerConfig::FromJson(j["aligner"]);
  if (j.contains("selection")) c.selection = SelectionCriteria::FromJson(j["selection"]);
  if (j.contains("tiers")) {
    if (!j["tiers"].is_array() || j["tiers"].empty()) Invalid("tiers must be a non-empty array");
    c.tiers.clear();
    for (const auto &t : j["tiers"]) c.tiers.push_back(RatioIn01(t, "tier threshold"));
  }
  if (j.contains("manifest_max_cer"))
    c.manifest_max_cer = RatioIn01(j["manifest_max_cer"], "manifest_max_cer");
  if (j.contains("splits")) {
    const json &s = j["splits"];
    c.splits.train = s.value("train", c.splits.train);
    c.splits.dev = s.value("dev", c.splits.dev);
    c.splits.test = s.value("test", c.splits.test);
    c.split_seed = s.value("seed", c.split_seed);
  }

  const json adapters = j.value("adapters", json::object());
  c.vad_command = adapters.value("vad", std::string());
  c.convert_command = adapters.value("convert", std::string());
  if (adapters.contains("asr")) {
    const json &a = adapters["asr"];
    AsrAdapter asr;
    asr.command = a.value("command", std::string());
    asr.model_tag = a.value("model_tag", asr.model_tag);
    if (asr.command.empty()) Invalid("adapters.asr.command is empty");
    c.asr = asr;
  }
  if (adapters.contains("llm")) {
    const json &a = adapters["llm"];
    LlmHook h;
    h.command = a.value("command", std::string());
    std::string mode = a.value("mode", std::string("length_prefixed"));
    if (mode == "file_args")
      h.mode = LlmHook::Mode::kFileArgs;
    else if (mode != "length_prefixed")
      Invalid("unknown llm mode '" + mode + "'");
    if (a.contains("formats")) h.formats = a["formats"].get<std::set<std::string>>();
    if (a.contains("prompt_file")) {
      h.system_prompt = ReadFileBytes(Resolve(base, a["prompt_file"].get<std::string>()));
      h.prompt_version = a.value("prompt_version", std::string("custom"));
    }
    c.llm = h;
  }
  for (const auto &e : adapters.value("extractors", json::array())) {
    ExternalExtractor x;
    x.command = e.at("command").get<std::string>();
    x.version = e.value("version", std::string());
    c.extractors[e.at("format").get<std::string>()] = x;
  }
  for (const auto &h : adapters.value("fetch_handlers", json::array()))
    c.fetch_handlers.push_back({h.at("pattern").get<std::string>(), h.at("command").get<std::string>()});
  c.precomputed_asr_dir = Resolve(base, j.value("precomputed_asr_dir", std::string()));

  if (const char *env = std::getenv("LONGALIGN_STORE"); env && *env)
    c.store_dir = fs::absolute(env).lexically_normal();
  return c;
}

}  // namespace

void PipelineConfig::Validate() const {
  if (work_dir.empty()) Invalid("work_dir is empty");
  if (workers < 1 || workers > 256) Invalid("workers must be in [1, 256]");
  if (max_retries < 1) Invalid("max_retries must be at least 1");
  if (lease_ms <= 0) Invalid("lease_s must be positive");
  if (backoff_ms < 0) Invalid("backoff_s must not be negative");
  segmenter.Validate();
  aligner.Validate();
  splits.Validate();
  for (std::size_t i = 1; i < tiers.size(); ++i)
    if (!(tiers[i] < tiers[i - 1])) Invalid("tiers must be strictly decreasing");
  if (!asr && precomputed_asr_dir.empty())
    Invalid("either adapters.asr or precomputed_asr_dir is required");
  CheckCommand(vad_command, "vad");
  CheckCommand(convert_command, "convert");
  if (asr) CheckCommand(asr->command, "asr");
  if (llm) CheckCommand(llm->command, "llm");
  for (const auto &[fmt, x] : extractors) CheckCommand(x.command, "extractor " + fmt);
  for (const auto &h : fetch_handlers) CheckCommand(h.command, "fetch handler");
  for (const auto &h : fetch_handlers) {
    try {
      FetchOptions o;
      o.handlers = {h};
      ResolveHandler("x:", o);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kConfigInvalid) throw;
    }
  }
}

ParserRegistry PipelineConfig::Registry() const {
  ParserRegistry r = ParserRegistry::Default();
  for (const auto &[fmt, x] : extractors) r.RegisterExternal(fmt, x);
  return r;
}

FetchOptions PipelineConfig::Fetch() const {
  FetchOptions o;
  o.handlers = fetch_handlers;
  o.base_dir = links_csv.empty() ? fs::path() : links_csv.parent_path();
  o.timeout = stage_timeout;
  return o;
}

PipelineConfig ParseConfig(const json &j, const fs::path &base_dir) {
  PipelineConfig c;
  try {
    c = ParseUnchecked(j, base_dir);
  } catch (const json::exception &e) {
    Invalid(std::string("config: ") + e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kConfigInvalid) throw;
    Invalid(e.what());
  }
  c.Validate();
  return c;
}

PipelineConfig LoadConfig(const fs::path &path) {
  std::string text;
  try {
    text = ReadFileBytes(path);
  } catch (const Error &e) {
    Invalid("cannot read config " + path.string());
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) Invalid("config " + path.string() + " is not valid JSON");
  return ParseConfig(j, fs::absolute(path).parent_path());
}

}  // namespace longalign
