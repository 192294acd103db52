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

#ifndef DLGANN_ERROR_H_
#define DLGANN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlgann {

enum class ErrorCode {
  kMalformedLine,
  kEmptyDialogue,
  kDuplicateId,
  kIoError,
  kMalformedRecord,
  kTagGrammarError,
  kTooShort,
  kSpanCoverageError,
  kSchemaError,
  kDimensionMismatch,
  kMissingRecord,
  kNonFiniteValue,
  kZeroEmbedding,
  kBundleMismatch,
  kInvalidHParams,
  kMissingSummary,
  kDivisionByZero,
  kMissingBundle,
  kTagCountMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing Error. The code identifies
// the failure class; what() carries a human-readable message that names the
// offending record where one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dlgann

#endif  // DLGANN_ERROR_H_
