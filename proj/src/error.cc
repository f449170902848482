// src/error.cc

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

#include "longalign/error.h"

namespace longalign {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidEncoding: return "InvalidEncoding";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kNoCuesFound: return "NoCuesFound";
    case ErrorCode::kUnknownFormat: return "UnknownFormat";
    case ErrorCode::kExtractorFailed: return "ExtractorFailed";
    case ErrorCode::kExtractorTimeout: return "ExtractorTimeout";
    case ErrorCode::kHookFailed: return "HookFailed";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kInvalidAudio: return "InvalidAudio";
    case ErrorCode::kAdapterFailed: return "AdapterFailed";
    case ErrorCode::kMalformedAdapterOutput: return "MalformedAdapterOutput";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kNoCandidates: return "NoCandidates";
    case ErrorCode::kWriteFailed: return "WriteFailed";
    case ErrorCode::kDuplicateTranscript: return "DuplicateTranscript";
    case ErrorCode::kHandlerNotFound: return "HandlerNotFound";
    case ErrorCode::kDownloadFailed: return "DownloadFailed";
    case ErrorCode::kConversionFailed: return "ConversionFailed";
    case ErrorCode::kStoreCorrupt: return "StoreCorrupt";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kStageOrderViolation: return "StageOrderViolation";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace longalign
