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

#include "dfl/linear_model.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dfl/errors.h"
#include "dfl/types.h"

namespace dfl {

int LinearModel::AddVariable(double lower, double upper, double cost,
                             bool integer, std::string name) {
  if (name.empty()) name = "z" + std::to_string(num_vars());
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer);
  var_names_.push_back(std::move(name));
  for (auto& row : rows_) row.push_back(0.0);
  return num_vars() - 1;
}

int LinearModel::AddRow(const std::vector<std::pair<int, double>>& terms,
                        Sense sense, double rhs, std::string name) {
  std::vector<double> dense(num_vars(), 0.0);
  for (const auto& [j, a] : terms) {
    if (j < 0 || j >= num_vars()) {
      Fail(ErrorCode::kDomainError, "row term refers to unknown variable");
    }
    dense[j] += a;
  }
  return AddDenseRow(std::move(dense), sense, rhs, std::move(name));
}

int LinearModel::AddDenseRow(std::vector<double> coefficients, Sense sense,
                             double rhs, std::string name) {
  if (static_cast<int>(coefficients.size()) != num_vars()) {
    Fail(ErrorCode::kDimensionMismatch, "dense row length != num_vars");
  }
  if (name.empty()) name = "c" + std::to_string(num_rows());
  rows_.push_back(std::move(coefficients));
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

int LinearModel::num_integer_vars() const {
  return static_cast<int>(std::count(integer_.begin(), integer_.end(), true));
}

double LinearModel::Evaluate(std::span<const double> z) const {
  return Dot(objective_, z) + objective_offset_;
}

double LinearModel::MaxViolation(std::span<const double> z) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lower_[j] - z[j]);
    worst = std::max(worst, z[j] - upper_[j]);
  }
  for (int r = 0; r < num_rows(); ++r) {
    const double activity = Dot(rows_[r], z);
    switch (senses_[r]) {
      case Sense::kLe:
        worst = std::max(worst, activity - rhs_[r]);
        break;
      case Sense::kGe:
        worst = std::max(worst, rhs_[r] - activity);
        break;
      case Sense::kEq:
        worst = std::max(worst, std::abs(activity - rhs_[r]));
        break;
    }
  }
  return worst;
}

void LinearModel::Validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  for (int j = 0; j < num_vars(); ++j) {
    if (!finite(objective_[j])) {
      Fail(ErrorCode::kDomainError, "non-finite objective coefficient");
    }
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j]) {
      Fail(ErrorCode::kDomainError,
           "invalid bounds for variable " + var_names_[j]);
    }
  }
  for (int r = 0; r < num_rows(); ++r) {
    if (static_cast<int>(rows_[r].size()) != num_vars()) {
      Fail(ErrorCode::kDimensionMismatch, "row length != num_vars");
    }
    if (!finite(rhs_[r]) || !std::all_of(rows_[r].begin(), rows_[r].end(),
                                         finite)) {
      Fail(ErrorCode::kDomainError, "non-finite row " + row_names_[r]);
    }
  }
}

std::string ToLpString(const LinearModel& model) {
  std::ostringstream out;
  out.precision(17);
  auto write_terms = [&](const std::vector<double>& coeffs) {
    bool first = true;
    for (int j = 0; j < model.num_vars(); ++j) {
      if (coeffs[j] == 0.0) continue;
      out << (coeffs[j] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      const double mag = std::abs(coeffs[j]);
      if (mag != 1.0) out << mag << " ";
      out << model.var_name(j);
      first = false;
    }
    if (first) out << "0";
  };

  out << "minimize\n  obj: ";
  write_terms(model.objective());
  if (model.objective_offset() != 0.0) {
    out << " + " << model.objective_offset();
  }
  out << "\nsubject to\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    out << "  " << model.row_name(r) << ": ";
    write_terms(model.row(r));
    switch (model.sense(r)) {
      case Sense::kLe:
        out << " <= ";
        break;
      case Sense::kGe:
        out << " >= ";
        break;
      case Sense::kEq:
        out << " = ";
        break;
    }
    out << model.rhs(r) << "\n";
  }
  out << "bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const double lo = model.lower()[j];
    const double hi = model.upper()[j];
    out << "  ";
    if (lo <= -kInfiniteBound) {
      out << "-inf";
    } else {
      out << lo;
    }
    out << " <= " << model.var_name(j) << " <= ";
    if (hi >= kInfiniteBound) {
      out << "+inf";
    } else {
      out << hi;
    }
    out << "\n";
  }
  bool any_integer = false;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (!model.is_integer(j)) continue;
    if (!any_integer) out << "general\n ";
    any_integer = true;
    out << " " << model.var_name(j);
  }
  if (any_integer) out << "\n";
  out << "end\n";
  return out.str();
}

}  // namespace dfl
