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

#ifndef DFL_PROBLEM_H_
#define DFL_PROBLEM_H_

#include <span>
#include <vector>

#include "dfl/types.h"

namespace dfl {

enum class RoleKind { kObjectiveCoeff, kConstraintCoeff, kRhs };

// Where a block of predicted outputs lands inside the problem's parameters.
struct ParameterRole {
  RoleKind kind = RoleKind::kObjectiveCoeff;
  std::vector<int> index_map;  // output position -> parameter position
};

// Outcome of repairing a first-stage decision under realized parameters.
//
// `repaired_decision` is the decision finally executed, feasible for the
// realized parameters. `realized_objective` is what that execution actually
// earns, correction costs included; `penalty` is the part of it charged to
// correcting an infeasible first stage, and `repaired_objective` the rest.
// A first stage that is already feasible carries no penalty.
struct RecourseOutcome {
  DecisionVector repaired_decision;
  double repaired_objective = 0.0;  // realized - penalty
  double realized_objective = 0.0;  // minimization convention
  double penalty = 0.0;             // realized - repaired, >= 0
  bool needed_recourse = false;     // first stage infeasible under y
};

// A parametric problem z*(y) = argmin_{z ∈ Z(y)} f(z, y). Implementations
// are immutable and safe to share across threads.
class ParametricProblem {
 public:
  virtual ~ParametricProblem() = default;

  // Dimension d of the predicted parameter vector.
  virtual int output_dim() const = 0;
  virtual const std::vector<ParameterRole>& roles() const = 0;

  // True when predictions occur in the constraints, i.e. a first-stage
  // decision can be infeasible under the realized parameters.
  virtual bool has_penalty() const = 0;

  // True when predictions enter the objective linearly and nowhere else.
  virtual bool objective_linear_in_predictions() const = 0;

  // z*(params). Throws SolverFailure if the solve does not reach Optimal.
  virtual SolveResult Solve(std::span<const double> params) const = 0;

  // f(z, params), minimization convention. Objective coefficients are taken
  // from `params`; constraints are not checked.
  virtual double Objective(const DecisionVector& z,
                           std::span<const double> params) const = 0;

  // Repairs z under realized parameters y.
  virtual RecourseOutcome Recourse(const DecisionVector& z,
                                   std::span<const double> y) const = 0;
};

}  // namespace dfl

#endif  // DFL_PROBLEM_H_
