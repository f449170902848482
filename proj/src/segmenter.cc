// src/segmenter.cc

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

#include "longalign/segmenter.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "longalign/error.h"
#include "longalign/subprocess.h"

namespace longalign {

namespace {

constexpr double kEps = 1e-9;

std::string_view SplitPolicyName(SplitPolicy p) {
  return p == SplitPolicy::kMidpoint ? "midpoint" : "lowest_energy_middle_third";
}

double SplitPoint(const SpeechInterval &iv, const SegmenterConfig &cfg,
                  const FrameEnergies *energies) {
  const double mid = 0.5 * (iv.start_s + iv.end_s);
  if (cfg.split_policy != SplitPolicy::kLowestEnergyMiddleThird || !energies ||
      energies->db.empty())
    return mid;
  const double lo = iv.start_s + iv.duration() / 3.0;
  const double hi = iv.start_s + 2.0 * iv.duration() / 3.0;
  const double fs = energies->frame_s;
  auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(lo / fs - kEps)));
  double best_db = 0;
  double best_t = mid;
  bool found = false;
  for (std::size_t f = first; f < energies->db.size(); ++f) {
    double t = static_cast<double>(f) * fs;
    if (t > hi + kEps) break;
    if (!found || energies->db[f] < best_db) {
      best_db = energies->db[f];
      best_t = t;
      found = true;
    }
  }
  return found ? best_t : mid;
}

void SplitLong(const SpeechInterval &iv, const SegmenterConfig &cfg,
               const FrameEnergies *energies, std::vector<SpeechInterval> *out) {
  if (iv.duration() <= cfg.max_len_s + kEps) {
    out->push_back(iv);
    return;
  }
  double t = SplitPoint(iv, cfg, energies);
  SpeechInterval left = iv, right = iv;
  left.end_s = t;
  right.start_s = t;
  SplitLong(left, cfg, energies, out);
  SplitLong(right, cfg, energies, out);
}

}  // namespace

void SegmenterConfig::Validate() const {
  if (!(min_len_s > 0 && min_len_s < max_len_s))
    throw Error(ErrorCode::kConfigInvalid, "segmenter requires 0 < min_len_s < max_len_s");
  if (!(frame_ms > 0)) throw Error(ErrorCode::kConfigInvalid, "frame_ms must be positive");
  if (!(reference_percentile >= 0 && reference_percentile <= 100))
    throw Error(ErrorCode::kConfigInvalid, "reference_percentile must be in [0, 100]");
  if (min_gap_ms < 0 || max_merge_gap_ms < 0)
    throw Error(ErrorCode::kConfigInvalid, "gap settings must be non-negative");
}

nlohmann::json SegmenterConfig::ToJson() const {
  return {{"min_len_s", min_len_s},
          {"max_len_s", max_len_s},
          {"frame_ms", frame_ms},
          {"energy_threshold_db", energy_threshold_db},
          {"reference_percentile", reference_percentile},
          {"min_gap_ms", min_gap_ms},
          {"max_merge_gap_ms", max_merge_gap_ms},
          {"split_policy", SplitPolicyName(split_policy)}};
}

SegmenterConfig SegmenterConfig::FromJson(const nlohmann::json &j) {
  SegmenterConfig c;
  c.min_len_s = j.value("min_len_s", c.min_len_s);
  c.max_len_s = j.value("max_len_s", c.max_len_s);
  c.frame_ms = j.value("frame_ms", c.frame_ms);
  c.energy_threshold_db = j.value("energy_threshold_db", c.energy_threshold_db);
  c.reference_percentile = j.value("reference_percentile", c.reference_percentile);
  c.min_gap_ms = j.value("min_gap_ms", c.min_gap_ms);
  c.max_merge_gap_ms = j.value("max_merge_gap_ms", c.max_merge_gap_ms);
  std::string policy = j.value("split_policy", std::string(SplitPolicyName(c.split_policy)));
  if (policy == "midpoint")
    c.split_policy = SplitPolicy::kMidpoint;
  else if (policy == "lowest_energy_middle_third")
    c.split_policy = SplitPolicy::kLowestEnergyMiddleThird;
  else
    throw Error(ErrorCode::kConfigInvalid, "unknown split_policy '" + policy + "'");
  return c;
}

FrameEnergies ComputeFrameEnergies(const Audio &audio, const SegmenterConfig &cfg) {
  FrameEnergies fe;
  const auto frame_len = static_cast<std::size_t>(
      std::max(1.0, std::round(audio.sample_rate * cfg.frame_ms / 1000.0)));
  fe.frame_s = static_cast<double>(frame_len) / audio.sample_rate;
  const std::size_t n = audio.samples.size();
  fe.db.reserve(n / frame_len + 1);
  for (std::size_t b = 0; b < n; b += frame_len) {
    std::size_t e = std::min(n, b + frame_len);
    double sum = 0;
    for (std::size_t i = b; i < e; ++i) sum += static_cast<double>(audio.samples[i]) * audio.samples[i];
    fe.db.push_back(10.0 * std::log10(sum / static_cast<double>(e - b) + 1e-12));
  }
  return fe;
}

std::vector<SpeechInterval> DetectSpeech(const Audio &audio, const SegmenterConfig &cfg) {
  if (audio.samples.empty()) throw Error(ErrorCode::kEmptyAudio, "no samples");
  if (audio.sample_rate < 8000)
    throw Error(ErrorCode::kInvalidAudio,
                "sample rate " + std::to_string(audio.sample_rate) + " below 8000 Hz");
  FrameEnergies fe = ComputeFrameEnergies(audio, cfg);
  std::vector<double> sorted = fe.db;
  std::sort(sorted.begin(), sorted.end());
  auto rank = static_cast<std::size_t>(
      std::floor(cfg.reference_percentile / 100.0 * static_cast<double>(sorted.size() - 1)));
  const double threshold = sorted[rank] + cfg.energy_threshold_db;

  // speech runs as half-open frame ranges
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t f = 0; f < fe.db.size(); ++f) {
    if (fe.db[f] <= threshold) continue;
    if (!runs.empty() && runs.back().second == f) {
      runs.back().second = f + 1;
    } else if (!runs.empty() &&
               static_cast<double>(f - runs.back().second) * fe.frame_s * 1000.0 <
                   cfg.min_gap_ms - kEps) {
      runs.back().second = f + 1;
    } else {
      runs.emplace_back(f, f + 1);
    }
  }
  std::vector<SpeechInterval> out;
  const double total = audio.duration_s();
  for (auto [b, e] : runs)
    out.push_back({static_cast<double>(b) * fe.frame_s,
                   std::min(total, static_cast<double>(e) * fe.frame_s),
                   IntervalSource::kEnergyVad});
  return out;
}

std::vector<SpeechInterval> EnforceDuration(std::vector<SpeechInterval> intervals,
                                            const SegmenterConfig &cfg,
                                            const FrameEnergies *energies) {
  std::vector<SpeechInterval> v;
  for (const auto &iv : intervals) SplitLong(iv, cfg, energies, &v);

  const double max_gap = cfg.max_merge_gap_ms / 1000.0;
  while (true) {
    auto it = std::find_if(v.begin(), v.end(), [&](const SpeechInterval &iv) {
      return iv.duration() < cfg.min_len_s - kEps;
    });
    if (it == v.end()) break;
    std::size_t i = static_cast<std::size_t>(it - v.begin());
    double prev_gap = -1, next_gap = -1;
    if (i > 0 && v[i].end_s - v[i - 1].start_s <= cfg.max_len_s + kEps &&
        v[i].start_s - v[i - 1].end_s <= max_gap + kEps)
      prev_gap = v[i].start_s - v[i - 1].end_s;
    if (i + 1 < v.size() && v[i + 1].end_s - v[i].start_s <= cfg.max_len_s + kEps &&
        v[i + 1].start_s - v[i].end_s <= max_gap + kEps)
      next_gap = v[i + 1].start_s - v[i].end_s;
    if (prev_gap < 0 && next_gap < 0) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    } else if (prev_gap >= 0 && (next_gap < 0 || prev_gap <= next_gap)) {
      v[i - 1].end_s = v[i].end_s;
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      v[i].end_s = v[i + 1].end_s;
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i + 1));
    }
  }
  return v;
}

std::vector<SpeechInterval> SegmentAudio(const Audio &audio, const SegmenterConfig &cfg) {
  auto speech = DetectSpeech(audio, cfg);
  FrameEnergies fe = ComputeFrameEnergies(audio, cfg);
  return EnforceDuration(std::move(speech), cfg, &fe);
}

AdapterIntervals ParseVadAdapterOutput(const std::string &out) {
  AdapterIntervals result;
  std::istringstream in(out);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    if (fields >> extra) a.clear();
    double s = 0, e = 0;
    auto parse = [](const std::string &t, double *v) {
      if (t.empty()) return false;
      auto r = std::from_chars(t.data(), t.data() + t.size(), *v);
      return r.ec == std::errc() && r.ptr == t.data() + t.size() && std::isfinite(*v);
    };
    if (!parse(a, &s) || !parse(b, &e) || s < 0 || e <= s)
      throw Error(ErrorCode::kMalformedAdapterOutput,
                  "line " + std::to_string(line_no) + ": '" + line + "'");
    result.intervals.push_back({s, e, IntervalSource::kExternal});
  }
  auto &v = result.intervals;
  if (!std::is_sorted(v.begin(), v.end(), [](const auto &x, const auto &y) {
        return x.start_s < y.start_s;
      })) {
    std::stable_sort(v.begin(), v.end(),
                     [](const auto &x, const auto &y) { return x.start_s < y.start_s; });
    result.warnings.push_back("adapter intervals out of order; sorted");
  }
  std::vector<SpeechInterval> merged;
  for (const auto &iv : v) {
    if (!merged.empty() && iv.start_s < merged.back().end_s) {
      merged.back().end_s = std::max(merged.back().end_s, iv.end_s);
      result.warnings.push_back("overlapping adapter intervals merged at " +
                                std::to_string(iv.start_s));
    } else {
      merged.push_back(iv);
    }
  }
  v = std::move(merged);
  return result;
}

AdapterIntervals RunVadAdapter(const std::filesystem::path &audio_path,
                               const std::string &command,
                               std::chrono::milliseconds timeout) {
  std::string cmd = command;
  if (cmd.find("{audio}") == std::string::npos) cmd += " {audio}";
  ProcessResult r = RunCommand(ExpandCommand(cmd, {{"audio", audio_path.string()}}),
                               audio_path.string() + "\n", timeout);
  if (!r.ok())
    throw Error(ErrorCode::kAdapterFailed,
                r.timed_out ? "VAD adapter timed out"
                            : "VAD adapter exited with " + std::to_string(r.exit_code));
  return ParseVadAdapterOutput(r.out);
}

}  // namespace longalign
