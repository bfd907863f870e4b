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

#include "cloudjudge/error.hpp"

namespace cloudjudge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kValidationFailure: return "ValidationFailure";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kInputMissing: return "InputMissing";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kEmptySeries: return "EmptySeries";
    case ErrorCode::kDegenerateSample: return "DegenerateSample";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kProviderMismatch: return "ProviderMismatch";
    case ErrorCode::kResourceLimit: return "ResourceLimit";
    case ErrorCode::kDegenerateMomentum: return "DegenerateMomentum";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kDeterminismViolation: return "DeterminismViolation";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kParseFailure: return "ParseFailure";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateMomentum:
    case ErrorCode::kSolverFailure:
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kDeterminismViolation:
      return 3;
    case ErrorCode::kIoFailure:
      return 4;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace cloudjudge
