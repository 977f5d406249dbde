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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dfl/errors.h"
#include "dfl/linear_model.h"
#include "dfl/solvers.h"
#include "dfl/types.h"

namespace dfl {
namespace {

bool RowSatisfied(Sense sense, double activity, double rhs) {
  const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
  switch (sense) {
    case Sense::kLe:
      return activity <= rhs + tol;
    case Sense::kGe:
      return activity >= rhs - tol;
    case Sense::kEq:
      return std::abs(activity - rhs) <= tol;
  }
  return false;
}

}  // namespace

SolveResult SolveBruteForce(const LinearModel& model,
                            std::int64_t enumeration_cap) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  model.Validate();
  const int n = model.num_vars();
  const int m = model.num_rows();

  std::vector<std::int64_t> lo(n), hi(n);
  double combos = 1.0;
  for (int j = 0; j < n; ++j) {
    if (!model.is_integer(j) || model.lower()[j] <= -kInfiniteBound ||
        model.upper()[j] >= kInfiniteBound) {
      Fail(ErrorCode::kDomainError,
           "brute force needs bounded integer variables");
    }
    lo[j] = static_cast<std::int64_t>(std::ceil(model.lower()[j] - 1e-9));
    hi[j] = static_cast<std::int64_t>(std::floor(model.upper()[j] + 1e-9));
    if (hi[j] < lo[j]) {
      SolveResult empty;
      empty.status = SolveStatus::kInfeasible;
      return empty;
    }
    combos *= static_cast<double>(hi[j] - lo[j] + 1);
  }
  if (combos > static_cast<double>(enumeration_cap)) {
    Fail(ErrorCode::kCapExceeded, "enumeration exceeds cap");
  }

  // Column-major copy for incremental activity updates.
  std::vector<double> columns(static_cast<std::size_t>(n) * m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) columns[std::size_t(j) * m + r] = model.row(r)[j];
  }
  const std::vector<double>& cost = model.objective();

  std::vector<double> z(n);
  std::vector<double> activity(m, 0.0);
  for (int j = 0; j < n; ++j) z[j] = static_cast<double>(lo[j]);
  for (int r = 0; r < m; ++r) activity[r] = Dot(model.row(r), z);
  double objective = Dot(cost, z);

  auto feasible = [&](const std::vector<double>& act) {
    for (int r = 0; r < m; ++r) {
      if (!RowSatisfied(model.sense(r), act[r], model.rhs(r))) return false;
    }
    return true;
  };

  SolveResult result;
  result.decision.domain = VarDomain::kNonNegInteger;
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> exact_activity(m);
  for (;;) {
    // Incremental sums drift, so candidates are re-checked exactly.
    const double tol = 1e-7 * std::max(1.0, std::abs(best));
    if ((!found || objective < best - tol) && feasible(activity)) {
      for (int r = 0; r < m; ++r) exact_activity[r] = Dot(model.row(r), z);
      const double exact = Dot(cost, z);
      if (feasible(exact_activity) &&
          (!found ||
           exact < best - kTieTolerance * std::max(1.0, std::abs(best)))) {
        found = true;
        best = exact;
        result.decision.values = z;
      }
    }
    // Odometer step: the last variable moves fastest, so decisions are
    // visited in lexicographic order.
    int j = n - 1;
    while (j >= 0 && z[j] >= static_cast<double>(hi[j])) {
      const double delta = static_cast<double>(lo[j]) - z[j];
      z[j] = static_cast<double>(lo[j]);
      objective += delta * cost[j];
      for (int r = 0; r < m; ++r) activity[r] += delta * columns[std::size_t(j) * m + r];
      --j;
    }
    if (j < 0) break;
    z[j] += 1.0;
    objective += cost[j];
    for (int r = 0; r < m; ++r) activity[r] += columns[std::size_t(j) * m + r];
  }

  if (found) {
    result.status = SolveStatus::kOptimal;
    result.objective = model.Evaluate(result.decision.values);
  } else {
    result.status = SolveStatus::kInfeasible;
  }
  result.wall_time =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace dfl
