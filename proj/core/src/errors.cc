// Copyright 2026 The DFL-SFGE Authors
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

#include "dfl/errors.h"

#include <string>

namespace dfl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSolverFailure:
      return "SolverFailure";
    case ErrorCode::kDomainError:
      return "DomainError";
    case ErrorCode::kNumericalFailure:
      return "NumericalFailure";
    case ErrorCode::kCapExceeded:
      return "CapExceeded";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kDegenerateNormalizer:
      return "DegenerateNormalizer";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kLengthError:
      return "LengthError";
    case ErrorCode::kIneligibleProblem:
      return "IneligibleProblem";
    case ErrorCode::kConfigError:
      return "ConfigError";
    case ErrorCode::kInternal:
      return "Internal";
  }
  return "Unknown";
}

DflError::DflError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw DflError(code, message);
}

}  // namespace dfl
