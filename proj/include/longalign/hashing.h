// include/longalign/hashing.h

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

#ifndef LONGALIGN_HASHING_H_
#define LONGALIGN_HASHING_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace longalign {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);
// Streams the file. Throws kIoError.
std::string Sha256File(const std::filesystem::path &path);

// 64-bit FNV-1a, with the seed's eight little-endian bytes hashed first.
uint64_t Fnv1a64(std::string_view data, uint64_t seed = 0);

}  // namespace longalign

#endif  // LONGALIGN_HASHING_H_
