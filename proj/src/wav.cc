// src/wav.cc

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

#include "longalign/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "longalign/error.h"
#include "longalign/transcript_io.h"

namespace longalign {

namespace {

uint32_t ReadU32(std::string_view b, std::size_t off) {
  uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<uint8_t>(b[off + k]);
  return v;
}

uint16_t ReadU16(std::string_view b, std::size_t off) {
  return static_cast<uint16_t>(static_cast<uint8_t>(b[off]) |
                               (static_cast<uint8_t>(b[off + 1]) << 8));
}

void PutU32(std::string *s, uint32_t v) {
  for (int k = 0; k < 4; ++k) s->push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

void PutU16(std::string *s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xFF));
  s->push_back(static_cast<char>(v >> 8));
}

}  // namespace

Audio ParseWav(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE")
    throw Error(ErrorCode::kInvalidAudio, "not a RIFF/WAVE file");
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::string_view data;
  bool have_fmt = false, have_data = false;
  std::size_t off = 12;
  while (off + 8 <= b.size()) {
    std::string_view id = b.substr(off, 4);
    uint32_t size = ReadU32(b, off + 4);
    std::size_t body = off + 8;
    std::size_t avail = std::min<std::size_t>(size, b.size() - body);
    if (id == "fmt ") {
      if (avail < 16) throw Error(ErrorCode::kInvalidAudio, "short fmt chunk");
      format = ReadU16(b, body);
      channels = ReadU16(b, body + 2);
      rate = ReadU32(b, body + 4);
      bits = ReadU16(b, body + 14);
      if (format == 0xFFFE && avail >= 26) format = ReadU16(b, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      data = b.substr(body, avail);
      have_data = true;
    }
    off = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) throw Error(ErrorCode::kInvalidAudio, "missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw Error(ErrorCode::kInvalidAudio, "bad fmt chunk");
  if (!((format == 1 && bits == 16) || (format == 3 && bits == 32)))
    throw Error(ErrorCode::kInvalidAudio,
                "unsupported sample format " + std::to_string(format) + "/" +
                    std::to_string(bits));

  Audio audio;
  audio.sample_rate = static_cast<int>(rate);
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * bits / 8;
  const std::size_t frames = data.size() / frame_bytes;
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0;
    for (std::size_t c = 0; c < channels; ++c) {
      std::size_t at = i * frame_bytes + c * bits / 8;
      if (format == 1) {
        acc += static_cast<int16_t>(ReadU16(data, at)) / 32768.0;
      } else {
        uint32_t raw = ReadU32(data, at);
        float f;
        std::memcpy(&f, &raw, 4);
        acc += f;
      }
    }
    audio.samples[i] = static_cast<float>(acc / channels);
  }
  return audio;
}

Audio ReadWav(const std::filesystem::path &path) { return ParseWav(ReadFileBytes(path)); }

void WriteWav(const std::filesystem::path &path, const Audio &audio) {
  std::string out;
  const uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  out += "RIFF";
  PutU32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate));
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, data_bytes);
  for (float s : audio.samples) {
    long v = std::lround(std::clamp(s, -1.0f, 1.0f) * 32767.0f);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kWriteFailed, "cannot write " + path.string());
}

}  // namespace longalign
