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

#include "dfl/metrics.h"

#include <cmath>
#include <cstddef>
#include <string>

#include "dfl/errors.h"

namespace dfl {

const SolveResult& RequireOptimal(const SolveResult& result,
                                  const char* what) {
  if (!result.optimal()) {
    Fail(ErrorCode::kSolverFailure,
         std::string(what) + " ended with status " +
             std::string(SolveStatusName(result.status)));
  }
  return result;
}

double Regret(const ParametricProblem& problem, std::span<const double> y_hat,
              std::span<const double> y) {
  return PostHocRegret(problem, y_hat, y).regret;
}

EvalRecord PostHocRegret(const ParametricProblem& problem,
                         std::span<const double> y_hat,
                         std::span<const double> y) {
  return PostHocRegret(problem, y_hat, y,
                       RequireOptimal(problem.Solve(y), "full-information"));
}

EvalRecord PostHocRegret(const ParametricProblem& problem,
                         std::span<const double> y_hat,
                         std::span<const double> y,
                         const SolveResult& full_info) {
  if (static_cast<int>(y_hat.size()) != problem.output_dim() ||
      static_cast<int>(y.size()) != problem.output_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "parameter vector length");
  }
  const SolveResult first_stage =
      RequireOptimal(problem.Solve(y_hat), "first-stage");
  return EvaluateDecision(problem, first_stage.decision, y, full_info);
}

EvalRecord EvaluateDecision(const ParametricProblem& problem,
                            const DecisionVector& z_hat,
                            std::span<const double> y,
                            const SolveResult& full_info) {
  RequireOptimal(full_info, "full-information");
  const RecourseOutcome outcome = problem.Recourse(z_hat, y);
  EvalRecord record;
  record.full_info_objective = full_info.objective;
  record.regret = outcome.repaired_objective - full_info.objective;
  record.penalty = outcome.penalty;
  record.pregret = record.regret + record.penalty;
  record.needed_recourse = outcome.needed_recourse;
  return record;
}

double RelativePostHocRegret(const EvalRecord& record) {
  const double normalizer = std::abs(record.full_info_objective);
  if (normalizer < 1e-12) {
    Fail(ErrorCode::kDegenerateNormalizer,
         "full-information objective is zero");
  }
  return record.pregret / normalizer;
}

MetricsSummary AggregateMetrics(std::span<const EvalRecord> records,
                                std::span<const std::vector<double>> preds,
                                std::span<const std::vector<double>> truths) {
  if (records.empty() || preds.size() != records.size() ||
      truths.size() != records.size()) {
    Fail(ErrorCode::kEmptyInput, "metrics need equal-length non-empty lists");
  }
  MetricsSummary summary;
  summary.count = static_cast<int>(records.size());
  double rel_sum = 0.0;
  double feas_sum = 0.0;
  int feasible = 0;
  int infeasible = 0;
  for (const EvalRecord& record : records) {
    const double rel = RelativePostHocRegret(record);
    rel_sum += rel;
    if (record.needed_recourse) {
      ++infeasible;
    } else {
      feas_sum += rel;
      ++feasible;
    }
  }
  summary.rel_pregret = rel_sum / summary.count;
  summary.infeas_ratio = static_cast<double>(infeasible) / summary.count;
  if (feasible > 0) summary.feas_rel_pregret = feas_sum / feasible;

  double sq_sum = 0.0;
  std::size_t entries = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].size() != truths[i].size()) {
      Fail(ErrorCode::kDimensionMismatch, "prediction/truth length");
    }
    for (std::size_t j = 0; j < preds[i].size(); ++j) {
      const double e = preds[i][j] - truths[i][j];
      sq_sum += e * e;
    }
    entries += preds[i].size();
  }
  summary.mse = entries > 0 ? sq_sum / static_cast<double>(entries) : 0.0;
  return summary;
}

}  // namespace dfl
