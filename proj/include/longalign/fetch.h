// include/longalign/fetch.h

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

#ifndef LONGALIGN_FETCH_H_
#define LONGALIGN_FETCH_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace longalign {

// A custom retrieval command for URLs matching an ECMAScript regex.
// "{url}" and "{out}" are substituted; the command must create {out}.
struct FetchHandler {
  std::string pattern;
  std::string command;
};

struct FetchOptions {
  std::vector<FetchHandler> handlers;  // tried in order, before built-ins
  std::filesystem::path base_dir;      // resolves bare relative paths
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
};

enum class HandlerKind { kCustom, kHttp, kFile };

// Throws kHandlerNotFound.
HandlerKind ResolveHandler(const std::string &url, const FetchOptions &opts);

// Retrieves url into dest. HTTP downloads accumulate in "<dest>.part" and
// resume from its size with a Range request. Throws kHandlerNotFound,
// kDownloadFailed.
void FetchUrl(const std::string &url, const std::filesystem::path &dest,
              const FetchOptions &opts);

// Canonical 16-bit mono WAV. With a command ("{in}", "{out}") the command
// converts; without one the input must already be WAV. Throws
// kConversionFailed.
void ConvertToWav(const std::filesystem::path &in, const std::filesystem::path &out,
                  const std::string &command, std::chrono::milliseconds timeout);

}  // namespace longalign

#endif  // LONGALIGN_FETCH_H_
