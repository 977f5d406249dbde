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

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's solvers.

#ifndef DFL_TESTS_TEST_UTIL_H_
#define DFL_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "dfl/problems.h"

namespace dfl::testing {

struct EnumResult {
  std::vector<double> z;
  double value = -std::numeric_limits<double>::infinity();
  bool feasible = false;
};

// Enumerates binary vectors in lexicographic order (z_0 most significant)
// and keeps the first maximizer of `value` among those `feasible` accepts.
inline EnumResult EnumerateBinaryMax(
    int n, const std::function<bool(const std::vector<double>&)>& feasible,
    const std::function<double(const std::vector<double>&)>& value) {
  EnumResult best;
  std::vector<double> z(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int i = 0; i < n; ++i) z[i] = double((mask >> (n - 1 - i)) & 1u);
    if (!feasible(z)) continue;
    const double v = value(z);
    if (!best.feasible ||
        v > best.value + 1e-9 * std::max(1.0, std::abs(best.value))) {
      best = {z, v, true};
    }
  }
  return best;
}

// 0/1 knapsack by enumeration: maximize v·z subject to w·z <= capacity.
inline EnumResult KnapsackByEnumeration(const std::vector<double>& v,
                                        const std::vector<double>& w,
                                        double capacity) {
  const int n = static_cast<int>(v.size());
  return EnumerateBinaryMax(
      n,
      [&](const std::vector<double>& z) {
        double load = 0.0;
        for (int i = 0; i < n; ++i) load += w[i] * z[i];
        return load <= capacity + 1e-9;
      },
      [&](const std::vector<double>& z) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[i] * z[i];
        return s;
      });
}

// Integer set multi-cover by enumeration over z ∈ {0..zmax}^m:
// minimize c·z subject to A z >= d. Returns +inf cost if infeasible.
struct CoverResult {
  std::vector<int> z;
  double cost = std::numeric_limits<double>::infinity();
};

inline CoverResult CoverByEnumeration(
    const std::vector<std::vector<int>>& a, const std::vector<double>& c,
    const std::vector<double>& d, int zmax) {
  const int m = static_cast<int>(c.size());
  const int n = static_cast<int>(d.size());
  CoverResult best;
  std::vector<int> z(m, 0);
  for (;;) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      double cov = 0.0;
      for (int j = 0; j < m; ++j) cov += a[i][j] * z[j];
      ok = cov >= d[i] - 1e-9;
    }
    if (ok) {
      double cost = 0.0;
      for (int j = 0; j < m; ++j) cost += c[j] * z[j];
      if (cost < best.cost - 1e-9) best = {z, cost};
    }
    int k = m - 1;
    while (k >= 0 && z[k] == zmax) z[k--] = 0;
    if (k < 0) break;
    ++z[k];
  }
  return best;
}

inline StaticData RandomKpStatic(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> value(1, 100);
  std::uniform_int_distribution<int> weight(1, 15);
  StaticData data;
  data.num_items = n;
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    data.values.push_back(value(rng));
    data.weights.push_back(weight(rng));
    total += data.weights.back();
  }
  data.capacity = std::round(0.5 * static_cast<double>(total));
  return data;
}

inline StaticData RandomWsmcStatic(int items, int sets, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cost(1, 100);
  std::bernoulli_distribution coin(0.4);
  std::uniform_int_distribution<int> pick(0, sets - 1);
  StaticData data;
  data.num_items = items;
  for (int j = 0; j < sets; ++j) data.costs.push_back(cost(rng));
  data.availability.assign(items, std::vector<int>(sets, 0));
  for (auto& row : data.availability) {
    for (int& a : row) a = coin(rng) ? 1 : 0;
    if (std::count(row.begin(), row.end(), 1) == 0) row[pick(rng)] = 1;
  }
  return data;
}

}  // namespace dfl::testing

#endif  // DFL_TESTS_TEST_UTIL_H_
