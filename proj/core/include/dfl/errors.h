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

#ifndef DFL_ERRORS_H_
#define DFL_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfl {

enum class ErrorCode {
  kSolverFailure,
  kDomainError,
  kNumericalFailure,
  kCapExceeded,
  kEmptyInput,
  kDegenerateNormalizer,
  kDimensionMismatch,
  kLengthError,
  kIneligibleProblem,
  kConfigError,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every library failure is reported through this exception; `code()` lets
// callers (the CLI in particular) map failures onto exit codes.
class DflError : public std::runtime_error {
 public:
  DflError(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace dfl

#endif  // DFL_ERRORS_H_
