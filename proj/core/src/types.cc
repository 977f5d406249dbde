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

#include "dfl/types.h"

#include <cmath>
#include <cstddef>

namespace dfl {

bool RespectsDomain(const DecisionVector& z, double tol) {
  for (double v : z.values) {
    if (!std::isfinite(v)) return false;
    switch (z.domain) {
      case VarDomain::kBinary:
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol) return false;
        break;
      case VarDomain::kNonNegInteger:
        if (v < -tol || std::abs(v - std::round(v)) > tol) return false;
        break;
      case VarDomain::kUnitInterval:
        if (v < -tol || v > 1.0 + tol) return false;
        break;
      case VarDomain::kContinuous:
        break;
    }
  }
  return true;
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kUnbounded:
      return "Unbounded";
  }
  return "Unknown";
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace dfl
