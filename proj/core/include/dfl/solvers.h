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

// Exact small-scale solvers. Every solver minimizes, reports the objective
// as Dot(cost, decision) in index order, and breaks ties among optimal
// decisions towards the lexicographically smallest vector (except the
// fractional greedy and the LP relaxation, whose optimum is a vertex).

#ifndef DFL_SOLVERS_H_
#define DFL_SOLVERS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "dfl/linear_model.h"
#include "dfl/types.h"

namespace dfl {

// Relative tolerance used when two objective values count as a tie.
inline constexpr double kTieTolerance = 1e-9;

// 0-1 knapsack by dynamic programming over integral capacities:
// maximize Σ v_i z_i s.t. Σ w_i z_i <= capacity. The reported objective is
// −Σ v_i z_i. Throws DomainError on a negative weight or capacity.
SolveResult SolveKnapsackDp(std::span<const double> values,
                            std::span<const std::int64_t> weights,
                            std::int64_t capacity);

// LP relaxation of the knapsack (z ∈ [0,1]) by the ratio greedy; at most
// one fractional item. Items with non-positive value are never selected.
// Throws DomainError on a non-positive weight or negative capacity.
SolveResult SolveFractionalKnapsack(std::span<const double> values,
                                    std::span<const double> weights,
                                    double capacity);

// maximize ΣΣ q_ij z_i z_j s.t. Σ w_i z_i <= capacity, z binary, by full
// enumeration. `q` is row-major n×n. CapExceeded when 2^n > enumeration_cap.
SolveResult SolveQuadraticKnapsack(std::span<const double> q,
                                   std::span<const double> weights,
                                   double capacity,
                                   std::int64_t enumeration_cap = 1 << 20);

// Dense two-phase primal simplex on the continuous relaxation of `model`
// (integrality ignored). Dantzig pricing with a switch to Bland's rule once
// degenerate pivots repeat. Returns kInfeasible / kUnbounded statuses;
// throws NumericalFailure when the iteration cap is hit or the tableau
// turns non-finite.
SolveResult SolveLpSimplex(const LinearModel& model);

// Same as above with the model's variable bounds replaced.
SolveResult SolveLpSimplex(const LinearModel& model,
                           std::span<const double> lower,
                           std::span<const double> upper);

struct BnBNodeInfo {
  std::int64_t id = 0;
  std::int64_t parent = -1;
  int depth = 0;
  SolveStatus lp_status = SolveStatus::kInfeasible;
  double lp_objective = 0.0;
  bool integral = false;
};

struct BnBConfig {
  double abs_gap = 1e-6;
  std::optional<double> time_limit;  // seconds
  std::optional<std::int64_t> node_limit;
  // Post-pass that moves the incumbent to the lexicographically smallest
  // integer part among decisions within abs_gap of the optimum.
  bool lexicographic = true;
  // Called after every node LP; used by tests to audit bounds.
  std::function<void(const BnBNodeInfo&)> observer;
};

// Best-first branch and bound over LP relaxations. Branches on the most
// fractional integer variable (lowest index on ties). All integer
// variables must have finite bounds (DomainError otherwise). Returns
// kOptimal, kInfeasible, kUnbounded, or kTimeLimit (time or node limit hit;
// the incumbent, if any, is returned).
SolveResult SolveMilpBnB(const LinearModel& model,
                         const BnBConfig& config = {});

// Exhaustive enumeration over a model whose variables are all integer with
// finite bounds. Enumerates in lexicographic order, so the first optimum
// found is the lexicographically smallest. CapExceeded when the product of
// domain sizes exceeds `enumeration_cap`.
SolveResult SolveBruteForce(const LinearModel& model,
                            std::int64_t enumeration_cap = 1 << 24);

}  // namespace dfl

#endif  // DFL_SOLVERS_H_
