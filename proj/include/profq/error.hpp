// Copyright 2026 The profq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace profq {

enum class ErrorCode {
  kMalformedRow,
  kDuplicateId,
  kUnknownOriginLabel,
  kEmptyFile,
  kUnknownId,
  kSchemaViolation,
  kInsufficientRecords,
  kEmptyLexicon,
  kIoFailure,
  kDegenerateInput,
  kNoWords,
  kNotAQuestion,
  kTooFewSamples,
  kConstantVector,
  kLengthMismatch,
  kSingleClassTraining,
  kDimensionMismatch,
  kEmptyCorpus,
  kVersionMismatch,
  kCorruptFile,
  kInvalidArgument,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownOriginLabel: return "UnknownOriginLabel";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kInsufficientRecords: return "InsufficientRecords";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNoWords: return "NoWords";
    case ErrorCode::kNotAQuestion: return "NotAQuestion";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kConstantVector: return "ConstantVector";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingleClassTraining: return "SingleClassTraining";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Every failure surfaced by the library carries one of the codes above so
// callers (and the CLI's exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace profq
