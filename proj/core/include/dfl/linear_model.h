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

#ifndef DFL_LINEAR_MODEL_H_
#define DFL_LINEAR_MODEL_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dfl {

enum class Sense { kLe, kGe, kEq };

// Bounds at or beyond this magnitude are treated as infinite.
inline constexpr double kInfiniteBound = 1e12;

// Dense mixed-integer linear model: minimize cᵀz + offset subject to
// row-wise constraints and per-variable bounds.
class LinearModel {
 public:
  LinearModel() = default;

  // Returns the index of the new variable. Existing rows get a zero entry.
  int AddVariable(double lower, double upper, double cost, bool integer,
                  std::string name = "");

  // Sparse term list (variable index, coefficient); duplicates are summed.
  int AddRow(const std::vector<std::pair<int, double>>& terms, Sense sense,
             double rhs, std::string name = "");
  int AddDenseRow(std::vector<double> coefficients, Sense sense, double rhs,
                  std::string name = "");

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer_vars() const;

  const std::vector<double>& objective() const { return objective_; }
  std::vector<double>& mutable_objective() { return objective_; }
  double objective_offset() const { return objective_offset_; }
  void set_objective_offset(double offset) { objective_offset_ = offset; }

  const std::vector<double>& row(int r) const { return rows_[r]; }
  Sense sense(int r) const { return senses_[r]; }
  double rhs(int r) const { return rhs_[r]; }

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  std::vector<double>& mutable_lower() { return lower_; }
  std::vector<double>& mutable_upper() { return upper_; }
  bool is_integer(int j) const { return integer_[j]; }
  const std::string& var_name(int j) const { return var_names_[j]; }
  const std::string& row_name(int r) const { return row_names_[r]; }

  // cᵀz + offset, summed in index order.
  double Evaluate(std::span<const double> z) const;

  // Largest violation over rows and bounds (0 when feasible). Integrality is
  // not included.
  double MaxViolation(std::span<const double> z) const;

  // Throws DomainError on inconsistent dimensions, inverted bounds, or
  // non-finite coefficients.
  void Validate() const;

 private:
  std::vector<double> objective_;
  double objective_offset_ = 0.0;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> integer_;
  std::vector<std::string> var_names_;
  std::vector<std::vector<double>> rows_;
  std::vector<Sense> senses_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

// Plain-text LP-style dump for debugging. Not a stable format.
std::string ToLpString(const LinearModel& model);

}  // namespace dfl

#endif  // DFL_LINEAR_MODEL_H_
