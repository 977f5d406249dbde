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

#include <chrono>
#include <cmath>
#include <string>

#include "dfl/errors.h"
#include "dfl/problems.h"
#include "dfl/solvers.h"

namespace dfl {

SolveResult SaaExtensiveSolve(const ProblemSpec& spec,
                              const ScenarioSet& scenarios,
                              const BnBConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const LinearModel model = spec.BuildSaaModel(scenarios);
  SolveResult full = SolveMilpBnB(model, config);
  if (full.status == SolveStatus::kInfeasible ||
      full.status == SolveStatus::kUnbounded) {
    Fail(ErrorCode::kInternal,
         "extensive form reported " +
             std::string(SolveStatusName(full.status)));
  }
  if (full.status == SolveStatus::kTimeLimit && full.decision.values.empty()) {
    Fail(ErrorCode::kSolverFailure, "extensive form hit its limit without "
                                    "an incumbent");
  }
  const int first =
      spec.kind() == ProblemKind::kWsmc ? spec.num_sets() : spec.num_items();
  SolveResult result;
  result.status = full.status;
  result.objective = full.objective;
  result.decision.domain = spec.kind() == ProblemKind::kWsmc
                               ? VarDomain::kNonNegInteger
                               : VarDomain::kBinary;
  result.decision.values.assign(full.decision.values.begin(),
                                full.decision.values.begin() + first);
  for (double& z : result.decision.values) z = std::round(z);
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

}  // namespace dfl
