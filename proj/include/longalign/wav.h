// include/longalign/wav.h

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

#ifndef LONGALIGN_WAV_H_
#define LONGALIGN_WAV_H_

#include <filesystem>
#include <string_view>
#include <vector>

namespace longalign {

// Mono samples in [-1, 1].
struct Audio {
  std::vector<float> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// RIFF/WAVE with PCM 16-bit or IEEE float 32-bit data; channels are averaged.
// Throws kInvalidAudio.
Audio ParseWav(std::string_view bytes);
Audio ReadWav(const std::filesystem::path &path);

// 16-bit PCM mono.
void WriteWav(const std::filesystem::path &path, const Audio &audio);

}  // namespace longalign

#endif  // LONGALIGN_WAV_H_
