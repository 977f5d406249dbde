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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dfl/errors.h"
#include "dfl/linear_model.h"
#include "dfl/solvers.h"
#include "test_util.h"

namespace dfl {
namespace {

using testing::KnapsackByEnumeration;

std::vector<double> AsDouble(const std::vector<std::int64_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

LinearModel KnapsackModel(const std::vector<double>& v,
                          const std::vector<std::int64_t>& w, double cap) {
  LinearModel model;
  std::vector<std::pair<int, double>> row;
  for (std::size_t i = 0; i < v.size(); ++i) {
    model.AddVariable(0, 1, -v[i], true);
    row.emplace_back(static_cast<int>(i), static_cast<double>(w[i]));
  }
  model.AddRow(row, Sense::kLe, cap);
  return model;
}

TEST(KnapsackDpTest, MatchesEnumerationAndMilp) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_int_distribution<int> value(0, 30);
  std::uniform_int_distribution<int> weight(0, 12);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = size(rng);
    std::vector<double> v(n);
    std::vector<std::int64_t> w(n);
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) {
      v[i] = value(rng);
      w[i] = weight(rng);
      total += w[i];
    }
    const std::int64_t cap = total / 2;
    const auto oracle = KnapsackByEnumeration(v, AsDouble(w), cap);
    const SolveResult dp = SolveKnapsackDp(v, w, cap);
    const SolveResult bnb = SolveMilpBnB(KnapsackModel(v, w, cap));
    const SolveResult brute = SolveBruteForce(KnapsackModel(v, w, cap));
    ASSERT_TRUE(dp.optimal());
    ASSERT_TRUE(bnb.optimal());
    ASSERT_TRUE(brute.optimal());
    EXPECT_DOUBLE_EQ(dp.objective, -oracle.value);
    EXPECT_NEAR(bnb.objective, -oracle.value, 1e-9);
    EXPECT_DOUBLE_EQ(brute.objective, -oracle.value);
    EXPECT_EQ(dp.decision.values, oracle.z);
    EXPECT_EQ(brute.decision.values, oracle.z);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(bnb.decision.values[i], oracle.z[i], 1e-9);
    }
  }
}

TEST(KnapsackDpTest, EdgeCases) {
  const std::vector<double> v = {5, 4};
  const std::vector<std::int64_t> w = {3, 2};
  EXPECT_EQ(SolveKnapsackDp(v, w, 0).decision.values,
            (std::vector<double>{0, 0}));
  EXPECT_EQ(SolveKnapsackDp(v, w, 100).decision.values,
            (std::vector<double>{1, 1}));
  EXPECT_DOUBLE_EQ(SolveKnapsackDp({}, {}, 3).objective, 0.0);
  EXPECT_THROW(SolveKnapsackDp(v, w, -1), DflError);
  EXPECT_THROW(SolveKnapsackDp(v, std::vector<std::int64_t>{1}, 3), DflError);
}

TEST(KnapsackDpTest, TiesPreferLexicographicallySmallest) {
  const std::vector<double> v = {3, 3, 3};
  const std::vector<std::int64_t> w = {1, 1, 1};
  EXPECT_EQ(SolveKnapsackDp(v, w, 1).decision.values,
            (std::vector<double>{0, 0, 1}));
}

TEST(FractionalKnapsackTest, MatchesSimplex) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(0.0, 20.0);
  std::uniform_real_distribution<double> weight(0.5, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 9;
    std::vector<double> v(n), w(n);
    double total = 0.0;
    LinearModel lp;
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) {
      v[i] = value(rng);
      w[i] = weight(rng);
      total += w[i];
      lp.AddVariable(0, 1, -v[i], false);
      row.emplace_back(i, w[i]);
    }
    const double cap = 0.4 * total;
    lp.AddRow(row, Sense::kLe, cap);
    const SolveResult greedy = SolveFractionalKnapsack(v, w, cap);
    const SolveResult simplex = SolveLpSimplex(lp);
    ASSERT_TRUE(simplex.optimal());
    EXPECT_NEAR(greedy.objective, simplex.objective, 1e-8);
    double load = 0.0;
    for (int i = 0; i < n; ++i) load += w[i] * greedy.decision.values[i];
    EXPECT_LE(load, cap + 1e-9);
  }
}

TEST(QuadraticKnapsackTest, MatchesEnumeration) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> q(-2.0, 10.0);
  std::uniform_int_distribution<int> weight(1, 9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<double> qq(n * n), w(n);
    for (double& x : qq) x = q(rng);
    double total = 0.0;
    for (double& x : w) total += (x = weight(rng));
    const double cap = std::round(total / 2);
    const auto oracle = testing::EnumerateBinaryMax(
        n,
        [&](const std::vector<double>& z) {
          double load = 0.0;
          for (int i = 0; i < n; ++i) load += w[i] * z[i];
          return load <= cap;
        },
        [&](const std::vector<double>& z) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) s += qq[i * n + j] * z[i] * z[j];
          }
          return s;
        });
    const SolveResult r = SolveQuadraticKnapsack(qq, w, cap);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.objective, -oracle.value, 1e-9);
    EXPECT_EQ(r.decision.values, oracle.z);
  }
  EXPECT_THROW(SolveQuadraticKnapsack(std::vector<double>(9), std::vector<double>{1, 1}, 1),
               DflError);
}

// Vertex enumeration: every choice of `n` active constraints (rows or
// bounds) that yields a nonsingular system is a candidate vertex.
double LpByVertexEnumeration(const LinearModel& m, bool* feasible) {
  const int n = m.num_vars();
  struct Plane {
    Eigen::VectorXd a;
    double b;
  };
  std::vector<Plane> planes;
  for (int r = 0; r < m.num_rows(); ++r) {
    planes.push_back({Eigen::Map<const Eigen::VectorXd>(m.row(r).data(), n),
                      m.rhs(r)});
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
    planes.push_back({e, m.lower()[j]});
    planes.push_back({e, m.upper()[j]});
  }
  const int k = static_cast<int>(planes.size());
  double best = std::numeric_limits<double>::infinity();
  *feasible = false;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int depth, int from) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        a.row(i) = planes[pick[i]].a.transpose();
        b[i] = planes[pick[i]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd z = lu.solve(b);
      std::vector<double> zz(z.data(), z.data() + n);
      if (m.MaxViolation(zz) > 1e-7) return;
      *feasible = true;
      best = std::min(best, m.Evaluate(zz));
      return;
    }
    for (int i = from; i < k; ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return best;
}

TEST(SimplexTest, MatchesVertexEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_int_distribution<int> sense(0, 2);
  int feasible_count = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 3;
    const int rows = 1 + trial % 4;
    LinearModel m;
    for (int j = 0; j < n; ++j) m.AddVariable(-3.0, 4.0, coef(rng), false);
    for (int r = 0; r < rows; ++r) {
      std::vector<double> a(n);
      for (double& x : a) x = coef(rng);
      const int s = sense(rng);
      m.AddDenseRow(a, s == 0 ? Sense::kLe : (s == 1 ? Sense::kGe : Sense::kEq),
                    coef(rng));
    }
    bool feasible = false;
    const double oracle = LpByVertexEnumeration(m, &feasible);
    const SolveResult r = SolveLpSimplex(m);
    if (!feasible) {
      EXPECT_EQ(r.status, SolveStatus::kInfeasible) << ToLpString(m);
      continue;
    }
    ++feasible_count;
    ASSERT_TRUE(r.optimal()) << ToLpString(m);
    EXPECT_NEAR(r.objective, oracle, 1e-7) << ToLpString(m);
    EXPECT_LE(m.MaxViolation(r.decision.values), 1e-7);
  }
  EXPECT_GT(feasible_count, 30);
}

TEST(SimplexTest, DetectsUnboundedAndInfeasible) {
  LinearModel unbounded;
  unbounded.AddVariable(0, kInfiniteBound, -1, false);
  EXPECT_EQ(SolveLpSimplex(unbounded).status, SolveStatus::kUnbounded);

  LinearModel infeasible;
  infeasible.AddVariable(0, 1, 1, false);
  infeasible.AddRow({{0, 1.0}}, Sense::kGe, 2.0);
  EXPECT_EQ(SolveLpSimplex(infeasible).status, SolveStatus::kInfeasible);
}

TEST(SimplexTest, RespectsOverriddenBounds) {
  LinearModel m;
  m.AddVariable(0, 10, -1, false);
  m.AddVariable(0, 10, -1, false);
  m.AddRow({{0, 1.0}, {1, 1.0}}, Sense::kLe, 8.0);
  const std::vector<double> lo = {0, 0}, hi = {2, 3};
  const SolveResult r = SolveLpSimplex(m, lo, hi);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.objective, -5.0, 1e-9);
}

TEST(BranchAndBoundTest, MatchesBruteForceOnCovers) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 60; ++trial) {
    const int items = 1 + trial % 4;
    const int sets = 2 + trial % 5;
    const StaticData data = testing::RandomWsmcStatic(items, sets, rng);
    std::uniform_int_distribution<int> demand(0, 3);
    std::vector<double> d(items);
    for (double& x : d) x = demand(rng);
    LinearModel m;
    for (int j = 0; j < sets; ++j) m.AddVariable(0, 3, data.costs[j], true);
    for (int i = 0; i < items; ++i) {
      std::vector<double> row(data.availability[i].begin(),
                              data.availability[i].end());
      m.AddDenseRow(row, Sense::kGe, d[i]);
    }
    const auto oracle =
        testing::CoverByEnumeration(data.availability, data.costs, d, 3);
    const SolveResult bnb = SolveMilpBnB(m);
    const SolveResult brute = SolveBruteForce(m);
    ASSERT_TRUE(bnb.optimal());
    ASSERT_TRUE(brute.optimal());
    EXPECT_NEAR(bnb.objective, oracle.cost, 1e-9);
    EXPECT_DOUBLE_EQ(brute.objective, oracle.cost);
    for (int j = 0; j < sets; ++j) {
      EXPECT_NEAR(bnb.decision.values[j], brute.decision.values[j], 1e-9);
    }
  }
}

TEST(BranchAndBoundTest, ChildBoundsNeverBeatParents) {
  std::mt19937_64 rng(23);
  const StaticData data = testing::RandomKpStatic(14, rng);
  LinearModel m = KnapsackModel(data.values, data.weights, data.capacity);
  std::map<std::int64_t, double> bound;
  bool monotone = true;
  BnBConfig config;
  config.observer = [&](const BnBNodeInfo& node) {
    if (node.lp_status != SolveStatus::kOptimal) return;
    bound[node.id] = node.lp_objective;
    auto parent = bound.find(node.parent);
    if (parent != bound.end() && node.lp_objective < parent->second - 1e-9) {
      monotone = false;
    }
  };
  const SolveResult r = SolveMilpBnB(m, config);
  ASSERT_TRUE(r.optimal());
  EXPECT_TRUE(monotone);
  EXPECT_GT(bound.size(), 1u);
}

TEST(BranchAndBoundTest, MixedIntegerModel) {
  // min -x - 2y, x + y <= 3.5, y <= 2.2, y integer, x continuous.
  LinearModel m;
  m.AddVariable(0, 10, -1, false);
  m.AddVariable(0, 10, -2, true);
  m.AddRow({{0, 1.0}, {1, 1.0}}, Sense::kLe, 3.5);
  m.AddRow({{1, 1.0}}, Sense::kLe, 2.2);
  const SolveResult r = SolveMilpBnB(m);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.decision.values[1], 2.0, 1e-9);
  EXPECT_NEAR(r.decision.values[0], 1.5, 1e-9);
  EXPECT_NEAR(r.objective, -5.5, 1e-9);
}

TEST(BranchAndBoundTest, InfeasibleIntegerModel) {
  LinearModel m;
  m.AddVariable(0, 1, 1, true);
  m.AddRow({{0, 2.0}}, Sense::kEq, 1.0);
  EXPECT_EQ(SolveMilpBnB(m).status, SolveStatus::kInfeasible);
}

TEST(BranchAndBoundTest, NodeLimitReportsIncumbentOrLimit) {
  std::mt19937_64 rng(29);
  const StaticData data = testing::RandomKpStatic(16, rng);
  BnBConfig config;
  config.node_limit = 1;
  const SolveResult r =
      SolveMilpBnB(KnapsackModel(data.values, data.weights, data.capacity),
                   config);
  EXPECT_TRUE(r.status == SolveStatus::kTimeLimit || r.optimal());
}

TEST(BruteForceTest, RejectsUnboundedAndOversized) {
  LinearModel m;
  m.AddVariable(0, kInfiniteBound, 1, true);
  EXPECT_THROW(SolveBruteForce(m), DflError);
  LinearModel big;
  for (int j = 0; j < 30; ++j) big.AddVariable(0, 1, 1, true);
  EXPECT_THROW(SolveBruteForce(big, 1000), DflError);
}

TEST(LinearModelTest, ValidateAndEvaluate) {
  LinearModel m;
  m.AddVariable(0, 2, 3, false);
  m.AddVariable(0, 2, -1, false);
  m.set_objective_offset(5);
  m.AddRow({{0, 1.0}, {0, 1.0}, {1, 1.0}}, Sense::kLe, 3);
  EXPECT_EQ(m.row(0), (std::vector<double>{2, 1}));
  const std::vector<double> z = {1, 1};
  EXPECT_DOUBLE_EQ(m.Evaluate(z), 7.0);
  EXPECT_DOUBLE_EQ(m.MaxViolation(z), 0.0);
  const std::vector<double> bad = {2, 2};
  EXPECT_DOUBLE_EQ(m.MaxViolation(bad), 3.0);
  m.mutable_lower()[0] = 5;
  EXPECT_THROW(m.Validate(), DflError);
}

}  // namespace
}  // namespace dfl
