// Copyright 2026 The dlgann Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dlgann/error.h"

namespace dlgann {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyDialogue: return "EmptyDialogue";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kTagGrammarError: return "TagGrammarError";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kSpanCoverageError: return "SpanCoverageError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingRecord: return "MissingRecord";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kZeroEmbedding: return "ZeroEmbedding";
    case ErrorCode::kBundleMismatch: return "BundleMismatch";
    case ErrorCode::kInvalidHParams: return "InvalidHParams";
    case ErrorCode::kMissingSummary: return "MissingSummary";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kMissingBundle: return "MissingBundle";
    case ErrorCode::kTagCountMismatch: return "TagCountMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace dlgann
