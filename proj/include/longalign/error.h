// include/longalign/error.h

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

#ifndef LONGALIGN_ERROR_H_
#define LONGALIGN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace longalign {

enum class ErrorCode {
  kInvalidEncoding,
  kOutOfRange,
  kEmptyReference,
  kNoCuesFound,
  kUnknownFormat,
  kExtractorFailed,
  kExtractorTimeout,
  kHookFailed,
  kEmptyAudio,
  kInvalidAudio,
  kAdapterFailed,
  kMalformedAdapterOutput,
  kSchemaError,
  kEmptyTranscript,
  kNoCandidates,
  kWriteFailed,
  kDuplicateTranscript,
  kHandlerNotFound,
  kDownloadFailed,
  kConversionFailed,
  kStoreCorrupt,
  kConfigInvalid,
  kStageOrderViolation,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// SchemaError / DuplicateTranscript carry the offending line or row.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, const std::string &what)
      : Error(code, "line " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace longalign

#endif  // LONGALIGN_ERROR_H_
