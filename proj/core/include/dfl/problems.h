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

// Benchmark problems: knapsack variants and weighted set multi-cover, with
// their recourse rules and two-stage (SAA) extensive forms.
//
// Predicted parameter layouts (n items, m sets for WSMC):
//   kKpValues     y = item values (n)
//   kKpQuadratic  y = value matrix, row-major (n*n)
//   kKpFractional y = item values (n) followed by item weights (n)
//   kKpWeights    y = item weights (n)
//   kKpCapacity   y = capacity (1)
//   kWsmc         y = coverage demands (one per item)

#ifndef DFL_PROBLEMS_H_
#define DFL_PROBLEMS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dfl/linear_model.h"
#include "dfl/problem.h"
#include "dfl/solvers.h"
#include "dfl/types.h"

namespace dfl {

enum class ProblemKind {
  kKpValues,
  kKpQuadratic,
  kKpFractional,
  kKpWeights,
  kKpCapacity,
  kWsmc,
};

std::string_view ProblemKindName(ProblemKind kind);
std::optional<ProblemKind> ParseProblemKind(std::string_view name);

// Problem constants shared by every instance of one dataset. Fields not
// used by a kind stay empty.
struct StaticData {
  int num_items = 0;
  std::vector<double> values;          // kKpWeights, kKpCapacity
  std::vector<std::int64_t> weights;   // kKpValues, kKpQuadratic, kKpCapacity
  double capacity = 0.0;               // every KP kind except kKpCapacity
  std::vector<double> costs;           // kWsmc, one per set
  std::vector<std::vector<int>> availability;  // kWsmc, items × sets, 0/1

  bool operator==(const StaticData&) const = default;
};

struct ProblemOptions {
  // Solve the KP second stage with the u+/u- MILP instead of the
  // equivalent knapsack DP.
  bool use_milp_recourse = false;
  // Build the WSMC SAA model with big-M indicator rows instead of the
  // direct shortfall rows.
  bool indicator_saa = false;
  BnBConfig bnb;  // observer is ignored
};

// Scenario samples for a two-stage model; each scenario has the layout of
// the problem's predicted parameter vector.
struct ScenarioSet {
  std::vector<std::vector<double>> scenarios;
  int size() const { return static_cast<int>(scenarios.size()); }
};

class ProblemSpec final : public ParametricProblem {
 public:
  // Throws ConfigError on inconsistent static data or an inadmissible rho
  // (rho >= 1 for kKpWeights, kKpCapacity and kWsmc; rho >= 0 otherwise).
  ProblemSpec(ProblemKind kind, StaticData data, double rho,
              ProblemOptions options = {});

  ProblemKind kind() const { return kind_; }
  const StaticData& static_data() const { return data_; }
  double rho() const { return rho_; }
  const ProblemOptions& options() const { return options_; }
  int num_items() const { return num_items_; }
  int num_sets() const;  // kWsmc only; 0 otherwise

  // ParametricProblem.
  int output_dim() const override { return output_dim_; }
  const std::vector<ParameterRole>& roles() const override { return roles_; }
  bool has_penalty() const override;
  bool objective_linear_in_predictions() const override;
  SolveResult Solve(std::span<const double> params) const override;
  double Objective(const DecisionVector& z,
                   std::span<const double> params) const override;
  RecourseOutcome Recourse(const DecisionVector& z,
                           std::span<const double> y) const override;

  // The parameters actually handed to the solver for a prediction:
  // integer-valued entries are rounded half-up and clamped (weights >= 1,
  // capacity and demands >= 0); fractional weights are floored at 1e-3.
  std::vector<double> SanitizePrediction(std::span<const double> params) const;

  // The first-stage model as a MILP (KP kinds other than kKpQuadratic, and
  // kWsmc). Used by the kWsmc solver and by tests.
  LinearModel BuildFirstStageModel(std::span<const double> params) const;

  // Second-stage u+/u- model for kKpWeights and kKpCapacity: variables
  // u+ (items 0..n-1) then u- (items n..2n-1), minimization form.
  LinearModel BuildSecondStageModel(const DecisionVector& z,
                                    std::span<const double> y) const;

  // Extensive form over `scenarios`; first-stage variables come first.
  // kKpWeights, kKpCapacity and kWsmc only (IneligibleProblem otherwise).
  LinearModel BuildSaaModel(const ScenarioSet& scenarios) const;

  // Min / max cost over the sets covering `item` (kWsmc).
  double MinCoverCost(int item) const { return min_cover_cost_[item]; }
  double MaxCoverCost(int item) const { return max_cover_cost_[item]; }

 private:
  RecourseOutcome KnapsackRecourse(const DecisionVector& z,
                                   std::span<const double> weights,
                                   double capacity) const;

  ProblemKind kind_;
  StaticData data_;
  double rho_;
  ProblemOptions options_;
  int num_items_ = 0;
  int output_dim_ = 0;
  std::vector<ParameterRole> roles_;
  std::vector<double> min_cover_cost_;
  std::vector<double> max_cover_cost_;
  std::vector<int> cheapest_cover_;
};

// Solves the extensive form and returns the first-stage decision only.
// kTimeLimit results carry the incumbent. Throws Internal if the model is
// reported infeasible (recourse is always available).
SolveResult SaaExtensiveSolve(const ProblemSpec& spec,
                              const ScenarioSet& scenarios,
                              const BnBConfig& config);

}  // namespace dfl

#endif  // DFL_PROBLEMS_H_
