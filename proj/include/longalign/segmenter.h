// include/longalign/segmenter.h

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

#ifndef LONGALIGN_SEGMENTER_H_
#define LONGALIGN_SEGMENTER_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "longalign/wav.h"

namespace longalign {

enum class IntervalSource { kEnergyVad, kExternal };

struct SpeechInterval {
  double start_s = 0;
  double end_s = 0;
  IntervalSource source = IntervalSource::kEnergyVad;

  double duration() const { return end_s - start_s; }
};

enum class SplitPolicy {
  kLowestEnergyMiddleThird,  // falls back to the midpoint without energies
  kMidpoint,
};

struct SegmenterConfig {
  double min_len_s = 3.0;
  double max_len_s = 20.0;
  double frame_ms = 30.0;
  // Speech frames exceed the reference level by this many dB.
  double energy_threshold_db = 6.0;
  // Percentile of frame energies used as the reference level.
  double reference_percentile = 10.0;
  double min_gap_ms = 300.0;
  // Largest silence bridged when merging a too-short utterance into a
  // neighbour.
  double max_merge_gap_ms = 1000.0;
  SplitPolicy split_policy = SplitPolicy::kLowestEnergyMiddleThird;

  // Throws kConfigInvalid.
  void Validate() const;
  nlohmann::json ToJson() const;
  static SegmenterConfig FromJson(const nlohmann::json &j);
};

// Per-frame log energy (dB relative to full scale).
struct FrameEnergies {
  double frame_s = 0.03;
  std::vector<double> db;
};

FrameEnergies ComputeFrameEnergies(const Audio &audio, const SegmenterConfig &cfg);

// Energy VAD. Throws kEmptyAudio, kInvalidAudio (sample rate below 8 kHz).
std::vector<SpeechInterval> DetectSpeech(const Audio &audio, const SegmenterConfig &cfg);

// Brings every interval into [min_len_s, max_len_s]: long ones are split
// recursively, short ones merged into a neighbour or dropped.
std::vector<SpeechInterval> EnforceDuration(std::vector<SpeechInterval> intervals,
                                            const SegmenterConfig &cfg,
                                            const FrameEnergies *energies = nullptr);

// DetectSpeech followed by EnforceDuration.
std::vector<SpeechInterval> SegmentAudio(const Audio &audio, const SegmenterConfig &cfg);

struct AdapterIntervals {
  std::vector<SpeechInterval> intervals;
  std::vector<std::string> warnings;
};

// Parses "start_s<TAB>end_s" lines. Out-of-order lines are sorted and
// overlaps merged, each with a warning. Throws kMalformedAdapterOutput.
AdapterIntervals ParseVadAdapterOutput(const std::string &out);

// Runs an external VAD ("{audio}" placeholder, else the path is appended).
// Throws kAdapterFailed, kMalformedAdapterOutput.
AdapterIntervals RunVadAdapter(const std::filesystem::path &audio_path,
                               const std::string &command,
                               std::chrono::milliseconds timeout);

}  // namespace longalign

#endif  // LONGALIGN_SEGMENTER_H_
