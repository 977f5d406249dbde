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

#include "dfl/datagen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dfl/errors.h"

namespace dfl {
namespace {

int OutputDim(ProblemKind kind, int n) {
  switch (kind) {
    case ProblemKind::kKpValues:
    case ProblemKind::kKpWeights:
    case ProblemKind::kWsmc:
      return n;
    case ProblemKind::kKpQuadratic:
      return n * n;
    case ProblemKind::kKpFractional:
      return 2 * n;
    case ProblemKind::kKpCapacity:
      return 1;
  }
  return n;
}

bool PoissonTargets(ProblemKind kind) {
  return kind == ProblemKind::kKpWeights ||
         kind == ProblemKind::kKpCapacity || kind == ProblemKind::kWsmc;
}

Eigen::VectorXd StandardNormal(int p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(p);
  for (int k = 0; k < p; ++k) x[k] = normal(rng);
  return x;
}

std::vector<std::int64_t> UniformInts(int n, std::int64_t lo, std::int64_t hi,
                                      Rng& rng) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace

void GenConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) Fail(ErrorCode::kConfigError, what);
  };
  require(p >= 1, "p must be >= 1");
  require(deg >= 1, "deg must be >= 1");
  require(noise_halfwidth >= 0.0 && noise_halfwidth < 1.0,
          "noise_halfwidth must lie in [0, 1)");
  require(n_instances >= 10, "n_instances must be >= 10");
  require(n_items >= 1, "n_items must be >= 1");
  require(density >= 0.0 && density <= 1.0, "density must lie in [0, 1]");
  require(capacity_fraction > 0.0, "capacity_fraction must be positive");
  require(probe_samples >= 2, "probe_samples must be >= 2");
  if (target_range) {
    require(target_range->first > 0.0 &&
                target_range->first < target_range->second,
            "target_range must satisfy 0 < lo < hi");
  }
  if (capacity) require(*capacity >= 0.0, "capacity must be non-negative");
}

std::pair<double, double> DefaultTargetRange(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kWsmc:
      return {1.0, 10.0};
    case ProblemKind::kKpCapacity:
      return {0.2, 0.8};
    default:
      return {1.0, 15.0};
  }
}

Mapping GenMapping(const GenConfig& config, int output_dim,
                   std::pair<double, double> range, Rng& rng,
                   bool rescale) {
  Mapping mapping;
  mapping.deg = config.deg;
  mapping.rescale = rescale;
  mapping.lo = range.first;
  mapping.hi = range.second;
  mapping.b.resize(output_dim, config.p);
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < output_dim; ++j) {
    for (int k = 0; k < config.p; ++k) mapping.b(j, k) = coin(rng) ? 1.0 : 0.0;
  }

  std::vector<Eigen::VectorXd> probe;
  probe.reserve(config.probe_samples);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < config.probe_samples; ++s) {
    probe.push_back(MappingBase(mapping, StandardNormal(config.p, rng)));
    lo = std::min(lo, probe.back().minCoeff());
    hi = std::max(hi, probe.back().maxCoeff());
  }
  mapping.base_min = lo;
  mapping.base_max = hi > lo ? hi : lo + 1.0;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(output_dim);
  const double scale =
      (mapping.hi - mapping.lo) / (mapping.base_max - mapping.base_min);
  for (const Eigen::VectorXd& base : probe) {
    if (rescale) {
      mean.array() += (mapping.lo + (base.array() - mapping.base_min) * scale)
                          .max(mapping.lo);
    } else {
      mean += base;
    }
  }
  mean /= static_cast<double>(probe.size());
  mapping.probe_mean.assign(mean.data(), mean.data() + output_dim);
  return mapping;
}

Eigen::VectorXd MappingBase(const Mapping& mapping, const Eigen::VectorXd& x) {
  if (x.size() != mapping.input_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "feature length");
  }
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(x.size()));
  Eigen::VectorXd base = mapping.b * x * inv_sqrt_p;
  for (Eigen::Index j = 0; j < base.size(); ++j) {
    base[j] = std::pow(base[j] + 3.0, mapping.deg) + 1.0;
  }
  return base;
}

Eigen::VectorXd MappingRate(const Mapping& mapping, const Eigen::VectorXd& x) {
  const double scale =
      (mapping.hi - mapping.lo) / (mapping.base_max - mapping.base_min);
  Eigen::VectorXd rate = MappingBase(mapping, x);
  if (!mapping.rescale) return rate;
  for (Eigen::Index j = 0; j < rate.size(); ++j) {
    rate[j] = std::max(mapping.lo,
                       mapping.lo + (rate[j] - mapping.base_min) * scale);
  }
  return rate;
}

std::vector<double> SampleDeterministicTargets(const Mapping& mapping,
                                               const Eigen::VectorXd& x,
                                               double noise_halfwidth,
                                               Rng& rng) {
  const Eigen::VectorXd rate = MappingRate(mapping, x);
  std::uniform_real_distribution<double> noise(1.0 - noise_halfwidth,
                                               1.0 + noise_halfwidth);
  std::vector<double> y(rate.size());
  for (Eigen::Index j = 0; j < rate.size(); ++j) {
    y[j] = noise_halfwidth > 0.0 ? rate[j] * noise(rng) : rate[j];
  }
  return y;
}

std::vector<double> SamplePoissonTargets(const Mapping& mapping,
                                         const Eigen::VectorXd& x, Rng& rng) {
  const Eigen::VectorXd rate = MappingRate(mapping, x);
  std::vector<double> y(rate.size());
  for (Eigen::Index j = 0; j < rate.size(); ++j) {
    std::poisson_distribution<long long> poisson(rate[j]);
    y[j] = static_cast<double>(std::max<long long>(1, poisson(rng)));
  }
  return y;
}

StaticData GenWsmcInstance(const GenConfig& config, Rng& rng) {
  const int n = config.n_items;
  const int m = config.n_sets;
  if (m < 2 || n > m) {
    Fail(ErrorCode::kConfigError, "WSMC needs n_sets >= max(2, n_items)");
  }
  StaticData data;
  data.num_items = n;
  data.availability.assign(n, std::vector<int>(m, 0));
  auto& a = data.availability;
  std::bernoulli_distribution entry(config.density);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) a[i][j] = entry(rng) ? 1 : 0;
  }
  std::uniform_int_distribution<int> pick_item(0, n - 1);
  for (int j = 0; j < m; ++j) {
    bool covers = false;
    for (int i = 0; i < n; ++i) covers |= a[i][j] != 0;
    if (!covers) a[pick_item(rng)][j] = 1;
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> free;
    int count = 0;
    for (int j = 0; j < m; ++j) {
      if (a[i][j] != 0) {
        ++count;
      } else {
        free.push_back(j);
      }
    }
    while (count < 2) {
      std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
      const std::size_t k = pick(rng);
      a[i][free[k]] = 1;
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(k));
      ++count;
    }
  }
  for (std::int64_t c : UniformInts(m, 1, 100, rng)) {
    data.costs.push_back(static_cast<double>(c));
  }
  return data;
}

Split MakeSplit(int n, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_train = n * 8 / 10;
  const int n_val = n / 10;
  Split split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Dataset BuildDataset(const GenConfig& config, ProblemKind kind,
                     std::uint64_t seed) {
  config.Validate();
  Rng rng = MakeRng(seed, {kStreamDataset});
  Dataset ds;
  ds.kind = kind;
  ds.config = config;
  ds.seed = seed;
  const int n = config.n_items;
  ds.static_data.num_items = n;
  auto range = config.target_range.value_or(DefaultTargetRange(kind));

  switch (kind) {
    case ProblemKind::kKpValues:
    case ProblemKind::kKpQuadratic:
      ds.static_data.weights = UniformInts(n, 1, 15, rng);
      break;
    case ProblemKind::kKpWeights:
      for (std::int64_t v : UniformInts(n, 1, 100, rng)) {
        ds.static_data.values.push_back(static_cast<double>(v));
      }
      break;
    case ProblemKind::kKpCapacity: {
      for (std::int64_t v : UniformInts(n, 1, 100, rng)) {
        ds.static_data.values.push_back(static_cast<double>(v));
      }
      ds.static_data.weights = UniformInts(n, 1, 15, rng);
      // One light item keeps every realized capacity >= 1 useful.
      std::uniform_int_distribution<int> pick(0, n - 1);
      ds.static_data.weights[pick(rng)] = 1;
      const double total = static_cast<double>(
          std::accumulate(ds.static_data.weights.begin(),
                          ds.static_data.weights.end(), std::int64_t{0}));
      range = {range.first * total, range.second * total};
      break;
    }
    case ProblemKind::kWsmc:
      ds.static_data = GenWsmcInstance(config, rng);
      break;
    case ProblemKind::kKpFractional:
      break;
  }

  ds.mapping =
      GenMapping(config, OutputDim(kind, n), range, rng,
                 PoissonTargets(kind) || config.target_range.has_value());

  auto capacity_from = [&](double expected_total) {
    return config.capacity.value_or(
        std::round(config.capacity_fraction * expected_total));
  };
  switch (kind) {
    case ProblemKind::kKpValues:
    case ProblemKind::kKpQuadratic:
      ds.static_data.capacity = capacity_from(static_cast<double>(
          std::accumulate(ds.static_data.weights.begin(),
                          ds.static_data.weights.end(), std::int64_t{0})));
      break;
    case ProblemKind::kKpFractional:
      ds.static_data.capacity = capacity_from(std::accumulate(
          ds.mapping.probe_mean.begin() + n, ds.mapping.probe_mean.end(),
          0.0));
      break;
    case ProblemKind::kKpWeights:
      ds.static_data.capacity = capacity_from(std::accumulate(
          ds.mapping.probe_mean.begin(), ds.mapping.probe_mean.end(), 0.0));
      break;
    default:
      break;
  }

  ds.instances.reserve(config.n_instances);
  for (int s = 0; s < config.n_instances; ++s) {
    const Eigen::VectorXd x = StandardNormal(config.p, rng);
    Instance inst;
    inst.x.assign(x.data(), x.data() + x.size());
    inst.y = PoissonTargets(kind)
                 ? SamplePoissonTargets(ds.mapping, x, rng)
                 : SampleDeterministicTargets(ds.mapping, x,
                                              config.noise_halfwidth, rng);
    ds.instances.push_back(std::move(inst));
  }
  Rng split_rng = MakeRng(seed, {kStreamSplit});
  ds.split = MakeSplit(config.n_instances, split_rng);
  return ds;
}

void Resplit(Dataset& dataset, std::uint64_t split_seed) {
  Rng rng = MakeRng(dataset.seed, {kStreamSplit, split_seed});
  dataset.split = MakeSplit(static_cast<int>(dataset.instances.size()), rng);
}

ProblemSpec MakeProblem(const Dataset& dataset, double rho,
                        ProblemOptions options) {
  return ProblemSpec(dataset.kind, dataset.static_data, rho,
                     std::move(options));
}

}  // namespace dfl
