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

// Experiment orchestration: one run per (method, rho, dataset, split) cell,
// the inference-time SAA sweep, and table / plot-data emission.

#ifndef DFL_EXPERIMENT_H_
#define DFL_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfl/datagen.h"
#include "dfl/metrics.h"
#include "dfl/predictor.h"
#include "dfl/problems.h"
#include "dfl/serialization.h"
#include "dfl/trainer.h"

namespace dfl {

struct ExperimentConfig {
  std::string benchmark = "kp_weights";
  ProblemKind kind = ProblemKind::kKpWeights;
  GenConfig gen;
  TrainConfig train;
  std::vector<Method> methods;
  std::vector<double> rho_grid;
  int n_datasets = 5;
  int n_splits = 3;
  std::vector<int> saa_k_grid = {1, 5, 10, 25};
  double saa_time_limit = 30.0;  // seconds per extensive-form solve
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int workers = 0;  // 0: one per hardware thread

  void Validate() const;  // ConfigError
};

// Benchmarks: kp_values, kp_quadratic, kp_fractional, kp_weights,
// kp_capacity, wsmc.
std::vector<std::string> PresetNames();

// Desk-scale defaults (KP-20, WSMC 5×15, K <= 25). ConfigError if unknown.
ExperimentConfig DeskPreset(std::string_view benchmark);

// Full-size instances (KP-50, WSMC 10×50, K <= 100, 1000 instances).
void ApplyPaperScale(ExperimentConfig& config);

// The preset named by "benchmark" (default kp_weights) overlaid with the
// remaining keys. `paper_scale` is applied before the overlay.
ExperimentConfig ExperimentConfigFromJson(const Json& j,
                                          bool paper_scale = false);
Json ToJson(const ExperimentConfig& config);

std::uint64_t DatasetSeed(std::uint64_t master_seed, int dataset_index);
std::uint64_t SplitSeed(std::uint64_t master_seed, int split_index);

struct RunRecord {
  std::string benchmark;
  std::string method;
  double rho = 0.0;
  std::uint64_t dataset_seed = 0;
  std::uint64_t split_seed = 0;
  std::string status = "ok";  // "ok" or "failed:<reason>"
  double rel_pregret = 0.0;
  std::optional<double> feas_rel_pregret;
  double infeas_ratio = 0.0;
  double mse = 0.0;
  int epochs = 0;
  double train_time_s = 0.0;
  double inference_time_s = 0.0;

  bool ok() const { return status == "ok"; }
};

// Field-wise equality, bitwise on doubles (NaN equals NaN). The two
// wall-clock fields are measurements and are compared only if
// `include_timings`.
bool SameRecord(const RunRecord& a, const RunRecord& b,
                bool include_timings = false);

struct TestEvaluation {
  MetricsSummary summary;
  std::vector<EvalRecord> records;
  double inference_time_s = 0.0;  // mean per instance: predict + solve
};

// Mean-prediction decisions on `examples` (full_info must be set).
TestEvaluation EvaluateModel(const ProblemSpec& problem,
                             const GaussianPredictor& model,
                             std::span<const Example> examples);

struct CellOutput {
  RunRecord record;
  std::optional<Checkpoint> checkpoint;  // absent for failed cells
};

// Builds the dataset, trains, and evaluates on the test split. Failures
// become a record with a failed status.
CellOutput RunCell(const ExperimentConfig& config, Method method, double rho,
                   std::uint64_t dataset_seed, std::uint64_t split_seed);

// Every (rho, method, dataset, split) cell on a worker pool. Records come
// back in cell order; `on_done` is called under a lock as cells finish.
std::vector<RunRecord> RunSweep(
    const ExperimentConfig& config,
    const std::function<void(const RunRecord&)>& on_done = {});

struct SaaPoint {
  int k = 0;
  double rel_pregret = 0.0;
  double inference_time_s = 0.0;  // mean per instance: sample + solve
  int time_limit_hits = 0;
};

// PFL+SAA: per test instance, draws K scenarios from the model's Gaussian
// (the first K of one stream per instance, so grids are nested) and
// evaluates the extensive-form first stage.
std::vector<SaaPoint> RunSaaSweep(const ProblemSpec& problem,
                                  const GaussianPredictor& model,
                                  std::span<const Example> test,
                                  std::span<const int> k_grid,
                                  const BnBConfig& bnb, std::uint64_t seed);

struct SaaCell {
  std::string benchmark;
  double rho = 0.0;
  std::uint64_t dataset_seed = 0;
  std::uint64_t split_seed = 0;
  std::vector<SaaPoint> points;
  double pfl_rel_pregret = 0.0;   // mean prediction, no sampling
  double sfge_rel_pregret = 0.0;  // SFGE mean prediction
  double sfge_inference_time_s = 0.0;
};

// Trains PFL_NLL and SFGE on one dataset/split and runs the SAA sweep.
SaaCell RunSaaCell(const ExperimentConfig& config, double rho,
                   std::uint64_t dataset_seed, std::uint64_t split_seed);

Json ToJson(const SaaCell& cell);
SaaCell SaaCellFromJson(const Json& j);

struct TableRow {
  std::string benchmark;
  std::string method;
  double rho = 0.0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for n = 1
  int n = 0;
};

// Mean ± std per (benchmark, method, rho) over successful runs. The
// feas_rel_pregret row is omitted when every run has infeas_ratio >=
// `omit_threshold`. EmptyInput on no records.
std::vector<TableRow> AggregateTables(std::span<const RunRecord> records,
                                      double omit_threshold = 0.98);

// Columns: benchmark,method,rho,metric,mean,std,n
std::string TablesToCsv(std::span<const TableRow> rows);

std::string RunRecordsToCsv(std::span<const RunRecord> records);
std::vector<RunRecord> RunRecordsFromCsv(std::string_view text);

// Per rho: K → mean rel_pregret and K → log10(mean runtime / mean K=1
// runtime) for PFL+SAA, with constant SFGE and PFL reference series.
// EmptyInput on no cells.
Json EmitPlotdata(std::span<const SaaCell> cells);

}  // namespace dfl

#endif  // DFL_EXPERIMENT_H_
