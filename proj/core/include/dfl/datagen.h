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

// Synthetic benchmark data. Features x ~ N(0, I_p); targets follow a
// hidden polynomial map of x,
//
//   base_j(x) = ((Bx)_j / sqrt(p) + 3)^deg + 1,   B ∈ {0,1}^{d×p},
//
// rescaled affinely onto a target range, then perturbed by multiplicative
// uniform noise (deterministic benchmarks) or used as a Poisson rate.

#ifndef DFL_DATAGEN_H_
#define DFL_DATAGEN_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dfl/problems.h"
#include "dfl/rng.h"

namespace dfl {

struct GenConfig {
  int p = 5;
  int deg = 5;
  double noise_halfwidth = 0.5;
  int n_instances = 1000;  // split 80/10/10
  int n_items = 20;
  int n_sets = 0;  // WSMC only
  double density = 0.1;  // WSMC availability density
  // Range of the rescaled map; defaults per problem kind when unset
  // (see DefaultTargetRange). Deterministic targets use the unscaled map
  // unless this is set.
  std::optional<std::pair<double, double>> target_range;
  // Capacity = round(capacity_fraction · Σ expected weights) unless
  // `capacity` is given.
  double capacity_fraction = 0.5;
  std::optional<double> capacity;
  int probe_samples = 10000;

  // Throws ConfigError when out of range.
  void Validate() const;

  bool operator==(const GenConfig&) const = default;
};

// Weights [1, 15] for the KP kinds, demands [1, 10] for WSMC; for
// kKpCapacity the range is a fraction of the total known weight and is
// resolved by BuildDataset.
std::pair<double, double> DefaultTargetRange(ProblemKind kind);

struct Mapping {
  Eigen::MatrixXd b;  // d × p, entries 0/1
  int deg = 1;
  double base_min = 0.0;  // over the probe sample
  double base_max = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  bool rescale = true;  // false: MappingRate is the unscaled base
  std::vector<double> probe_mean;  // mean of MappingRate per output

  int output_dim() const { return static_cast<int>(b.rows()); }
  int input_dim() const { return static_cast<int>(b.cols()); }
};

// Draws B and fits the rescale over `config.probe_samples` standard-normal
// probes. `range` overrides config.target_range.
Mapping GenMapping(const GenConfig& config, int output_dim,
                   std::pair<double, double> range, Rng& rng,
                   bool rescale = true);

// Unscaled polynomial map.
Eigen::VectorXd MappingBase(const Mapping& mapping, const Eigen::VectorXd& x);

// Rescaled map, clamped below at the range's lower end; the base itself
// when `rescale` is off.
Eigen::VectorXd MappingRate(const Mapping& mapping, const Eigen::VectorXd& x);

// y_j = rate_j(x) · u_j, u_j ~ Uniform[1 − halfwidth, 1 + halfwidth].
std::vector<double> SampleDeterministicTargets(const Mapping& mapping,
                                               const Eigen::VectorXd& x,
                                               double noise_halfwidth,
                                               Rng& rng);

// y_j ~ Poisson(rate_j(x)), clamped to >= 1.
std::vector<double> SamplePoissonTargets(const Mapping& mapping,
                                         const Eigen::VectorXd& x, Rng& rng);

// Availability matrix and set costs. Every set covers at least one item
// and every item is covered by at least two sets.
StaticData GenWsmcInstance(const GenConfig& config, Rng& rng);

struct Instance {
  std::vector<double> x;
  std::vector<double> y;

  bool operator==(const Instance&) const = default;
};

struct Split {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;

  bool operator==(const Split&) const = default;
};

struct Dataset {
  ProblemKind kind = ProblemKind::kKpValues;
  GenConfig config;
  std::uint64_t seed = 0;
  Mapping mapping;
  StaticData static_data;
  std::vector<Instance> instances;
  Split split;
};

// 80/10/10 split of a random permutation of 0..n-1; each part sorted.
Split MakeSplit(int n, Rng& rng);

// Deterministic in (config, kind, seed). The initial split is drawn from
// the same seed; Resplit replaces it.
Dataset BuildDataset(const GenConfig& config, ProblemKind kind,
                     std::uint64_t seed);

void Resplit(Dataset& dataset, std::uint64_t split_seed);

// Problem definition for a dataset.
ProblemSpec MakeProblem(const Dataset& dataset, double rho,
                        ProblemOptions options = {});

}  // namespace dfl

#endif  // DFL_DATAGEN_H_
