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

// Task losses and evaluation metrics for predict-then-optimize.

#ifndef DFL_METRICS_H_
#define DFL_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "dfl/problem.h"
#include "dfl/types.h"

namespace dfl {

// Per-example evaluation. Invariant: pregret == regret + penalty.
struct EvalRecord {
  double regret = 0.0;
  double penalty = 0.0;
  double pregret = 0.0;
  bool needed_recourse = false;
  double full_info_objective = 0.0;
};

// Throws SolverFailure unless `result` is Optimal.
const SolveResult& RequireOptimal(const SolveResult& result,
                                  const char* what);

// f(z', y) - f(z*(y), y), where z' is the decision actually executed: the
// prediction's decision after repair. For objective-only problems z' is
// z*(ŷ) and this is the classic regret.
double Regret(const ParametricProblem& problem, std::span<const double> y_hat,
              std::span<const double> y);

// Post-hoc regret: regret plus the penalty paid to repair z*(ŷ) under y.
EvalRecord PostHocRegret(const ParametricProblem& problem,
                         std::span<const double> y_hat,
                         std::span<const double> y);

// Same, reusing a precomputed full-information solve z*(y).
EvalRecord PostHocRegret(const ParametricProblem& problem,
                         std::span<const double> y_hat,
                         std::span<const double> y,
                         const SolveResult& full_info);

// Evaluates an arbitrary first-stage decision (e.g. from an SAA model).
EvalRecord EvaluateDecision(const ParametricProblem& problem,
                            const DecisionVector& z_hat,
                            std::span<const double> y,
                            const SolveResult& full_info);

// pregret / |f(z*(y), y)|. Throws DegenerateNormalizer below 1e-12.
double RelativePostHocRegret(const EvalRecord& record);

struct MetricsSummary {
  double rel_pregret = 0.0;
  std::optional<double> feas_rel_pregret;  // absent if every example needed
                                           // recourse
  double infeas_ratio = 0.0;
  double mse = 0.0;
  int count = 0;
};

// Means of per-example relative post-hoc regrets; `mse` averages squared
// errors over every predicted entry. Throws EmptyInput on empty or
// mismatched lists and DegenerateNormalizer on |f*| < 1e-12.
MetricsSummary AggregateMetrics(std::span<const EvalRecord> records,
                                std::span<const std::vector<double>> preds,
                                std::span<const std::vector<double>> truths);

}  // namespace dfl

#endif  // DFL_METRICS_H_
