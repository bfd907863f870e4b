// Copyright 2026 The CloudJudge Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cloudjudge {

enum class ErrorCode {
  kInvalidArgument,
  kValidationFailure,
  kConfigInvalid,
  kInputMissing,
  kIndexOutOfRange,
  kEmptyCloud,
  kEmptySeries,
  kDegenerateSample,
  kDimensionMismatch,
  kProviderMismatch,
  kResourceLimit,
  kDegenerateMomentum,
  kSolverFailure,
  kNumericalFailure,
  kDeterminismViolation,
  kIoFailure,
  kBadMagic,
  kBadVersion,
  kCorruptPayload,
  kParseFailure,
};

const char* to_string(ErrorCode code);

// Process exit code for a failure: 2 input/validation, 3 numerical/solver,
// 4 I/O.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cloudjudge
