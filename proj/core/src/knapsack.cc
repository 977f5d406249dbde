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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "dfl/errors.h"
#include "dfl/solvers.h"
#include "dfl/types.h"

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool StrictlyBetter(double candidate, double incumbent) {
  return candidate >
         incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
}

}  // namespace

SolveResult SolveKnapsackDp(std::span<const double> values,
                            std::span<const std::int64_t> weights,
                            std::int64_t capacity) {
  const auto start = Clock::now();
  const std::size_t n = values.size();
  if (weights.size() != n) {
    Fail(ErrorCode::kDimensionMismatch, "knapsack values/weights length");
  }
  if (capacity < 0) Fail(ErrorCode::kDomainError, "negative capacity");
  std::int64_t total_weight = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0) Fail(ErrorCode::kDomainError, "negative weight");
    if (!std::isfinite(values[i])) {
      Fail(ErrorCode::kDomainError, "non-finite item value");
    }
    total_weight += weights[i];
  }
  // Beyond the total weight every capacity behaves the same.
  const std::int64_t cap = std::min(capacity, total_weight);
  const std::size_t width = static_cast<std::size_t>(cap) + 1;

  // best[i * width + c]: optimal value using items i..n-1 with capacity c.
  // The suffix form lets the forward reconstruction prefer z_i = 0, which
  // yields the lexicographically smallest optimal selection.
  std::vector<double> best((n + 1) * width, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const double* next = &best[(i + 1) * width];
    double* cur = &best[i * width];
    const std::int64_t w = weights[i];
    for (std::int64_t c = 0; c <= cap; ++c) {
      double value = next[c];
      if (w <= c) value = std::max(value, values[i] + next[c - w]);
      cur[c] = value;
    }
  }

  SolveResult result;
  result.decision.domain = VarDomain::kBinary;
  result.decision.values.assign(n, 0.0);
  std::int64_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    const double* next = &best[(i + 1) * width];
    const std::int64_t w = weights[i];
    if (w <= c && StrictlyBetter(values[i] + next[c - w], next[c])) {
      result.decision.values[i] = 1.0;
      c -= w;
    }
  }
  result.objective = -Dot(values, result.decision.values);
  result.status = SolveStatus::kOptimal;
  result.wall_time = Seconds(start);
  return result;
}

SolveResult SolveFractionalKnapsack(std::span<const double> values,
                                    std::span<const double> weights,
                                    double capacity) {
  const auto start = Clock::now();
  const std::size_t n = values.size();
  if (weights.size() != n) {
    Fail(ErrorCode::kDimensionMismatch, "knapsack values/weights length");
  }
  if (!(capacity >= 0.0)) Fail(ErrorCode::kDomainError, "negative capacity");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) {
      Fail(ErrorCode::kDomainError, "non-positive fractional weight");
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] / weights[a] > values[b] / weights[b];
                   });

  SolveResult result;
  result.decision.domain = VarDomain::kUnitInterval;
  result.decision.values.assign(n, 0.0);
  double remaining = capacity;
  for (std::size_t i : order) {
    if (values[i] <= 0.0 || remaining <= 0.0) break;
    if (weights[i] <= remaining) {
      result.decision.values[i] = 1.0;
      remaining -= weights[i];
    } else {
      result.decision.values[i] = remaining / weights[i];
      remaining = 0.0;
    }
  }
  result.objective = -Dot(values, result.decision.values);
  result.status = SolveStatus::kOptimal;
  result.wall_time = Seconds(start);
  return result;
}

SolveResult SolveQuadraticKnapsack(std::span<const double> q,
                                   std::span<const double> weights,
                                   double capacity,
                                   std::int64_t enumeration_cap) {
  const auto start = Clock::now();
  const std::size_t n = weights.size();
  if (q.size() != n * n) {
    Fail(ErrorCode::kDimensionMismatch, "quadratic knapsack matrix size");
  }
  if (n >= 62 || (std::int64_t{1} << n) > enumeration_cap) {
    Fail(ErrorCode::kCapExceeded, "quadratic knapsack too large to enumerate");
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(capacity));

  SolveResult result;
  result.decision.domain = VarDomain::kBinary;
  std::vector<double> z(n, 0.0);
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_z(n, 0.0);
  const std::uint64_t count = std::uint64_t{1} << n;
  // z_0 is the most significant bit, so increasing masks visit decisions in
  // lexicographic order and the first optimum is the smallest.
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = static_cast<double>((mask >> (n - 1 - i)) & 1u);
      weight += weights[i] * z[i];
    }
    if (weight > capacity + tol) continue;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (z[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) value += q[i * n + j] * z[j];
    }
    if (StrictlyBetter(value, best_value) ||
        best_value == -std::numeric_limits<double>::infinity()) {
      best_value = value;
      best_z = z;
    }
  }
  result.decision.values = best_z;
  if (best_value == -std::numeric_limits<double>::infinity()) {
    result.status = SolveStatus::kInfeasible;
  } else {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (best_z[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) value += q[i * n + j] * best_z[j];
    }
    result.objective = -value;
    result.status = SolveStatus::kOptimal;
  }
  result.wall_time = Seconds(start);
  return result;
}

}  // namespace dfl
