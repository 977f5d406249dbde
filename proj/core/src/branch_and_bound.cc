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
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "dfl/errors.h"
#include "dfl/linear_model.h"
#include "dfl/solvers.h"
#include "dfl/types.h"

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegralityTol = 1e-6;

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  double bound = -std::numeric_limits<double>::infinity();
  std::int64_t id = 0;
  std::int64_t parent = -1;
  int depth = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

struct SearchLimits {
  std::optional<Clock::time_point> deadline;
  std::optional<std::int64_t> node_limit;
  std::int64_t nodes_used = 0;

  bool exhausted() const {
    if (node_limit && nodes_used >= *node_limit) return true;
    return deadline && Clock::now() >= *deadline;
  }
};

struct SearchOutcome {
  bool has_incumbent = false;
  std::vector<double> incumbent;
  double objective = std::numeric_limits<double>::infinity();
  bool unbounded = false;
  bool limit_hit = false;
};

// Most fractional integer variable, lowest index on ties; -1 if integral.
int PickBranchVariable(const LinearModel& model, const std::vector<double>& z) {
  int pick = -1;
  double best_score = kIntegralityTol;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (!model.is_integer(j)) continue;
    const double frac = z[j] - std::floor(z[j]);
    const double score = std::min(frac, 1.0 - frac);
    if (score > best_score) {
      best_score = score;
      pick = j;
    }
  }
  return pick;
}

SearchOutcome Search(const LinearModel& model, std::vector<double> lower,
                     std::vector<double> upper, double abs_gap,
                     SearchLimits& limits,
                     const std::function<void(const BnBNodeInfo&)>* observer,
                     const std::vector<double>* initial_incumbent) {
  SearchOutcome out;
  if (initial_incumbent != nullptr) {
    out.has_incumbent = true;
    out.incumbent = *initial_incumbent;
    out.objective = model.Evaluate(out.incumbent);
  }
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  open.push(Node{std::move(lower), std::move(upper),
                 -std::numeric_limits<double>::infinity(), next_id++, -1, 0});

  while (!open.empty()) {
    if (limits.exhausted()) {
      out.limit_hit = true;
      break;
    }
    if (out.has_incumbent && open.top().bound >= out.objective - abs_gap) {
      break;  // best-first: every open node is within the gap
    }
    Node node = open.top();
    open.pop();
    ++limits.nodes_used;

    SolveResult lp = SolveLpSimplex(model, node.lower, node.upper);
    const bool lp_optimal = lp.status == SolveStatus::kOptimal;
    int branch = -1;
    if (lp_optimal) branch = PickBranchVariable(model, lp.decision.values);
    if (observer != nullptr && *observer) {
      (*observer)(BnBNodeInfo{node.id, node.parent, node.depth, lp.status,
                              lp.objective, lp_optimal && branch < 0});
    }
    if (lp.status == SolveStatus::kUnbounded) {
      if (node.parent < 0) {
        out.unbounded = true;
        return out;
      }
      continue;
    }
    if (!lp_optimal) continue;
    if (out.has_incumbent && lp.objective >= out.objective - abs_gap) {
      continue;
    }
    if (branch < 0) {
      std::vector<double> z = lp.decision.values;
      for (int j = 0; j < model.num_vars(); ++j) {
        if (model.is_integer(j)) z[j] = std::round(z[j]);
      }
      const double objective = model.Evaluate(z);
      if (!out.has_incumbent ||
          objective <
              out.objective - 1e-12 * std::max(1.0, std::abs(objective))) {
        out.has_incumbent = true;
        out.incumbent = std::move(z);
        out.objective = objective;
      }
      continue;
    }
    const double value = lp.decision.values[branch];
    Node down{node.lower, node.upper, lp.objective, next_id++, node.id,
              node.depth + 1};
    down.upper[branch] = std::floor(value);
    Node up{std::move(node.lower), std::move(node.upper), lp.objective,
            next_id++, node.id, node.depth + 1};
    up.lower[branch] = std::ceil(value);
    open.push(std::move(down));
    open.push(std::move(up));
  }
  return out;
}

}  // namespace

SolveResult SolveMilpBnB(const LinearModel& model, const BnBConfig& config) {
  const auto start = Clock::now();
  model.Validate();
  if (config.abs_gap < 0.0) Fail(ErrorCode::kDomainError, "abs_gap < 0");
  const int n = model.num_vars();

  std::vector<double> lower = model.lower();
  std::vector<double> upper = model.upper();
  bool all_integer = n > 0;
  for (int j = 0; j < n; ++j) {
    if (!model.is_integer(j)) {
      all_integer = false;
      continue;
    }
    if (lower[j] <= -kInfiniteBound || upper[j] >= kInfiniteBound) {
      Fail(ErrorCode::kDomainError,
           "integer variable " + model.var_name(j) + " has an infinite bound");
    }
    lower[j] = std::ceil(lower[j] - kIntegralityTol);
    upper[j] = std::floor(upper[j] + kIntegralityTol);
  }

  SolveResult result;
  result.decision.domain =
      all_integer ? VarDomain::kNonNegInteger : VarDomain::kContinuous;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.wall_time =
        std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  SearchLimits limits;
  if (config.time_limit) {
    limits.deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(*config.time_limit));
  }
  limits.node_limit = config.node_limit;

  const auto* observer = config.observer ? &config.observer : nullptr;
  SearchOutcome main =
      Search(model, lower, upper, config.abs_gap, limits, observer, nullptr);
  if (main.unbounded) return finish(SolveStatus::kUnbounded);
  if (!main.has_incumbent) {
    return finish(main.limit_hit ? SolveStatus::kTimeLimit
                                 : SolveStatus::kInfeasible);
  }
  std::vector<double> z = std::move(main.incumbent);
  const double optimum = main.objective;

  if (config.lexicographic && !main.limit_hit &&
      model.num_integer_vars() > 0) {
    // Restrict to (near-)optimal decisions and minimize each integer
    // variable in turn, fixing it before moving on.
    LinearModel aux = model;
    aux.AddDenseRow(model.objective(), Sense::kLe,
                    optimum - model.objective_offset() + config.abs_gap +
                        1e-9 * std::max(1.0, std::abs(optimum)),
                    "optimality_cut");
    aux.set_objective_offset(0.0);
    for (int j = 0; j < n; ++j) {
      if (!model.is_integer(j)) continue;
      if (z[j] > lower[j] + 0.5) {
        std::fill(aux.mutable_objective().begin(),
                  aux.mutable_objective().end(), 0.0);
        aux.mutable_objective()[j] = 1.0;
        SearchOutcome sub = Search(aux, lower, upper, 1.0 - 1e-6, limits,
                                   nullptr, &z);
        if (sub.limit_hit) break;
        z = std::move(sub.incumbent);
      }
      lower[j] = upper[j] = z[j];
    }
    bool has_continuous = false;
    for (int j = 0; j < n; ++j) has_continuous |= !model.is_integer(j);
    if (has_continuous) {
      SolveResult polish = SolveLpSimplex(model, lower, upper);
      if (polish.status == SolveStatus::kOptimal) {
        for (int j = 0; j < n; ++j) {
          if (!model.is_integer(j)) z[j] = polish.decision.values[j];
        }
      }
    }
  }

  result.decision.values = std::move(z);
  result.objective = model.Evaluate(result.decision.values);
  return finish(main.limit_hit ? SolveStatus::kTimeLimit
                               : SolveStatus::kOptimal);
}

}  // namespace dfl
