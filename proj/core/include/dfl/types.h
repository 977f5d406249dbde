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

#ifndef DFL_TYPES_H_
#define DFL_TYPES_H_

#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace dfl {

// All objectives in this library are minimized. Maximization models are
// negated where they are built.

enum class VarDomain {
  kBinary,
  kNonNegInteger,
  kUnitInterval,
  kContinuous,
};

struct DecisionVector {
  std::vector<double> values;
  VarDomain domain = VarDomain::kContinuous;

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[i]; }
};

// True if every entry respects `domain` within `tol`.
bool RespectsDomain(const DecisionVector& z, double tol = 1e-9);

enum class SolveStatus {
  kOptimal,
  kTimeLimit,
  kInfeasible,
  kUnbounded,
};

std::string_view SolveStatusName(SolveStatus status);

struct SolveResult {
  DecisionVector decision;
  double objective = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::kInfeasible;
  double wall_time = 0.0;  // seconds

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Σ a_i b_i accumulated in index order. Every solver reports objectives
// through this so that equal decisions give bit-equal objectives.
double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace dfl

#endif  // DFL_TYPES_H_
