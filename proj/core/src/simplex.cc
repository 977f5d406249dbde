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
#include <span>
#include <vector>

#include "dfl/errors.h"
#include "dfl/linear_model.h"
#include "dfl/solvers.h"
#include "dfl/types.h"

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kPivotTol = 1e-9;
constexpr double kFeasibilityTol = 1e-7;
constexpr int kDegenerateStreakForBland = 50;

// How an original variable maps onto non-negative tableau columns.
struct ColumnMap {
  enum class Kind { kFixed, kShift, kMirror, kFree };
  Kind kind = Kind::kShift;
  double anchor = 0.0;  // lower bound (kShift), upper bound (kMirror), value
  int col = -1;
  int neg_col = -1;  // kFree only
};

struct StandardRow {
  std::vector<double> coeffs;  // over structural columns
  Sense sense;
  double rhs;
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((cols + 1) * std::size_t(rows), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double* row(int r) { return &data_[std::size_t(r) * (cols_ + 1)]; }
  const double* row(int r) const {
    return &data_[std::size_t(r) * (cols_ + 1)];
  }
  double& at(int r, int c) { return row(r)[c]; }
  double& rhs(int r) { return row(r)[cols_]; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

enum class Outcome { kOptimal, kUnbounded };

class SimplexEngine {
 public:
  SimplexEngine(Tableau& tableau, std::vector<int>& basis,
                const std::vector<bool>& may_enter, int iteration_cap)
      : t_(tableau),
        basis_(basis),
        may_enter_(may_enter),
        iteration_cap_(iteration_cap) {}

  // `cost` has one entry per column. Builds the reduced-cost row for the
  // current basis and iterates to optimality.
  Outcome Run(const std::vector<double>& cost) {
    const int m = t_.rows();
    const int n = t_.cols();
    reduced_.assign(n + 1, 0.0);
    for (int j = 0; j < n; ++j) reduced_[j] = cost[j];
    for (int r = 0; r < m; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* tr = t_.row(r);
      for (int j = 0; j <= n; ++j) reduced_[j] -= cb * tr[j];
    }
    double scale = 1.0;
    for (double c : cost) scale = std::max(scale, std::abs(c));
    const double dj_tol = 1e-9 * scale;

    int degenerate_streak = 0;
    bool bland = false;
    for (;;) {
      int enter = -1;
      double most_negative = -dj_tol;
      for (int j = 0; j < n; ++j) {
        if (!may_enter_[j] || reduced_[j] >= -dj_tol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (reduced_[j] < most_negative) {
          most_negative = reduced_[j];
          enter = j;
        }
      }
      if (enter < 0) return Outcome::kOptimal;

      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m; ++r) {
        const double a = t_.at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, t_.rhs(r)) / a;
        if (leave < 0 ||
            ratio < best_ratio - 1e-12 * std::max(1.0, best_ratio)) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 * std::max(1.0, best_ratio) &&
                   basis_[r] < basis_[leave]) {
          leave = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return Outcome::kUnbounded;

      if (best_ratio <= 1e-12) {
        if (++degenerate_streak > kDegenerateStreakForBland) bland = true;
      } else {
        degenerate_streak = 0;
      }
      Pivot(leave, enter);
      if (++iterations_ > iteration_cap_) {
        Fail(ErrorCode::kNumericalFailure, "simplex iteration cap reached");
      }
    }
  }

  void Pivot(int leave, int enter) {
    const int m = t_.rows();
    const int n = t_.cols();
    double* pr = t_.row(leave);
    const double pivot = pr[enter];
    if (!std::isfinite(pivot) || std::abs(pivot) < 1e-14) {
      Fail(ErrorCode::kNumericalFailure, "degenerate pivot element");
    }
    const double inv = 1.0 / pivot;
    for (int j = 0; j <= n; ++j) pr[j] *= inv;
    pr[enter] = 1.0;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      double* tr = t_.row(r);
      const double factor = tr[enter];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n; ++j) tr[j] -= factor * pr[j];
      tr[enter] = 0.0;
    }
    if (!reduced_.empty()) {
      const double factor = reduced_[enter];
      if (factor != 0.0) {
        for (int j = 0; j <= n; ++j) reduced_[j] -= factor * pr[j];
        reduced_[enter] = 0.0;
      }
    }
    basis_[leave] = enter;
  }

  // Phase objective value c_Bᵀ x_B.
  double value() const { return -reduced_.back(); }

 private:
  Tableau& t_;
  std::vector<int>& basis_;
  const std::vector<bool>& may_enter_;
  int iteration_cap_;
  int iterations_ = 0;
  std::vector<double> reduced_;
};

}  // namespace

SolveResult SolveLpSimplex(const LinearModel& model) {
  return SolveLpSimplex(model, model.lower(), model.upper());
}

SolveResult SolveLpSimplex(const LinearModel& model,
                           std::span<const double> lower,
                           std::span<const double> upper) {
  const auto start = Clock::now();
  const int nv = model.num_vars();
  SolveResult result;
  result.decision.domain = VarDomain::kContinuous;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.wall_time =
        std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  for (int j = 0; j < nv; ++j) {
    if (lower[j] > upper[j] + 1e-12) return finish(SolveStatus::kInfeasible);
  }

  // Map each variable onto non-negative structural columns.
  std::vector<ColumnMap> maps(nv);
  int num_structural = 0;
  std::vector<std::pair<int, double>> bound_rows;  // (column, upper)
  for (int j = 0; j < nv; ++j) {
    const double lo = lower[j];
    const double hi = upper[j];
    const bool lo_inf = lo <= -kInfiniteBound;
    const bool hi_inf = hi >= kInfiniteBound;
    ColumnMap& map = maps[j];
    if (!lo_inf && !hi_inf && hi - lo <= 1e-12) {
      map.kind = ColumnMap::Kind::kFixed;
      map.anchor = lo;
    } else if (!lo_inf) {
      map.kind = ColumnMap::Kind::kShift;
      map.anchor = lo;
      map.col = num_structural++;
      if (!hi_inf) bound_rows.emplace_back(map.col, hi - lo);
    } else if (!hi_inf) {
      map.kind = ColumnMap::Kind::kMirror;
      map.anchor = hi;
      map.col = num_structural++;
    } else {
      map.kind = ColumnMap::Kind::kFree;
      map.col = num_structural++;
      map.neg_col = num_structural++;
    }
  }

  // Structural costs and constant offset.
  std::vector<double> structural_cost(num_structural, 0.0);
  const std::vector<double>& c = model.objective();
  for (int j = 0; j < nv; ++j) {
    const ColumnMap& map = maps[j];
    switch (map.kind) {
      case ColumnMap::Kind::kFixed:
        break;
      case ColumnMap::Kind::kShift:
        structural_cost[map.col] += c[j];
        break;
      case ColumnMap::Kind::kMirror:
        structural_cost[map.col] -= c[j];
        break;
      case ColumnMap::Kind::kFree:
        structural_cost[map.col] += c[j];
        structural_cost[map.neg_col] -= c[j];
        break;
    }
  }

  std::vector<StandardRow> rows;
  rows.reserve(model.num_rows() + bound_rows.size());
  double rhs_scale = 1.0;
  for (int r = 0; r < model.num_rows(); ++r) {
    StandardRow row{std::vector<double>(num_structural, 0.0), model.sense(r),
                    model.rhs(r)};
    const std::vector<double>& a = model.row(r);
    bool any = false;
    for (int j = 0; j < nv; ++j) {
      if (a[j] == 0.0) continue;
      const ColumnMap& map = maps[j];
      switch (map.kind) {
        case ColumnMap::Kind::kFixed:
          row.rhs -= a[j] * map.anchor;
          break;
        case ColumnMap::Kind::kShift:
          row.rhs -= a[j] * map.anchor;
          row.coeffs[map.col] += a[j];
          any = true;
          break;
        case ColumnMap::Kind::kMirror:
          row.rhs -= a[j] * map.anchor;
          row.coeffs[map.col] -= a[j];
          any = true;
          break;
        case ColumnMap::Kind::kFree:
          row.coeffs[map.col] += a[j];
          row.coeffs[map.neg_col] -= a[j];
          any = true;
          break;
      }
    }
    rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
    if (!any) {
      const double tol = kFeasibilityTol * std::max(1.0, std::abs(row.rhs));
      const bool ok = (row.sense == Sense::kLe && 0.0 <= row.rhs + tol) ||
                      (row.sense == Sense::kGe && 0.0 >= row.rhs - tol) ||
                      (row.sense == Sense::kEq && std::abs(row.rhs) <= tol);
      if (!ok) return finish(SolveStatus::kInfeasible);
      continue;
    }
    rows.push_back(std::move(row));
  }
  for (const auto& [col, bound] : bound_rows) {
    StandardRow row{std::vector<double>(num_structural, 0.0), Sense::kLe,
                    bound};
    row.coeffs[col] = 1.0;
    rows.push_back(std::move(row));
  }
  for (StandardRow& row : rows) {
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.sense == Sense::kLe) {
        row.sense = Sense::kGe;
      } else if (row.sense == Sense::kGe) {
        row.sense = Sense::kLe;
      }
    }
  }

  // Column layout: structural | slack/surplus | artificial.
  const int m = static_cast<int>(rows.size());
  int num_slack = 0;
  int num_artificial = 0;
  for (const StandardRow& row : rows) {
    if (row.sense != Sense::kEq) ++num_slack;
    if (row.sense != Sense::kLe) ++num_artificial;
  }
  const int n = num_structural + num_slack + num_artificial;
  const int first_artificial = num_structural + num_slack;
  Tableau tableau(m, n);
  std::vector<int> basis(m, -1);
  int next_slack = num_structural;
  int next_artificial = first_artificial;
  for (int r = 0; r < m; ++r) {
    const StandardRow& row = rows[r];
    double* tr = tableau.row(r);
    std::copy(row.coeffs.begin(), row.coeffs.end(), tr);
    tableau.rhs(r) = row.rhs;
    if (row.sense == Sense::kLe) {
      tr[next_slack] = 1.0;
      basis[r] = next_slack++;
    } else {
      if (row.sense == Sense::kGe) tr[next_slack++] = -1.0;
      tr[next_artificial] = 1.0;
      basis[r] = next_artificial++;
    }
  }

  std::vector<bool> may_enter(n, true);
  const int iteration_cap = 50 * (m + n) + 1000;
  SimplexEngine engine(tableau, basis, may_enter, iteration_cap);

  if (num_artificial > 0) {
    std::vector<double> phase_one(n, 0.0);
    for (int j = first_artificial; j < n; ++j) phase_one[j] = 1.0;
    engine.Run(phase_one);
    if (engine.value() > kFeasibilityTol * rhs_scale) {
      return finish(SolveStatus::kInfeasible);
    }
    // Drive artificial columns out of the basis where possible; rows where
    // that is impossible are redundant and keep a zero-valued artificial.
    for (int r = 0; r < m; ++r) {
      if (basis[r] < first_artificial) continue;
      int best = -1;
      double best_mag = 1e-7;
      const double* tr = tableau.row(r);
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(tr[j]) > best_mag) {
          best_mag = std::abs(tr[j]);
          best = j;
        }
      }
      if (best >= 0) engine.Pivot(r, best);
    }
    for (int j = first_artificial; j < n; ++j) may_enter[j] = false;
  }

  std::vector<double> phase_two(n, 0.0);
  std::copy(structural_cost.begin(), structural_cost.end(),
            phase_two.begin());
  if (engine.Run(phase_two) == Outcome::kUnbounded) {
    return finish(SolveStatus::kUnbounded);
  }

  std::vector<double> x(n, 0.0);
  for (int r = 0; r < m; ++r) x[basis[r]] = std::max(0.0, tableau.rhs(r));
  std::vector<double>& z = result.decision.values;
  z.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    const ColumnMap& map = maps[j];
    switch (map.kind) {
      case ColumnMap::Kind::kFixed:
        z[j] = map.anchor;
        break;
      case ColumnMap::Kind::kShift:
        z[j] = map.anchor + x[map.col];
        break;
      case ColumnMap::Kind::kMirror:
        z[j] = map.anchor - x[map.col];
        break;
      case ColumnMap::Kind::kFree:
        z[j] = x[map.col] - x[map.neg_col];
        break;
    }
    if (!std::isfinite(z[j])) {
      Fail(ErrorCode::kNumericalFailure, "non-finite simplex solution");
    }
  }
  result.objective = model.Evaluate(z);
  return finish(SolveStatus::kOptimal);
}

}  // namespace dfl
