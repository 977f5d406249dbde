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

// Training: score-function gradient estimation (SFGE) of the expected task
// loss under the Gaussian predictor, plus prediction-focused (MSE, NLL) and
// SPO+ baselines.

#ifndef DFL_TRAINER_H_
#define DFL_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dfl/datagen.h"
#include "dfl/predictor.h"
#include "dfl/problems.h"
#include "dfl/types.h"

namespace dfl {

enum class Method { kSfge, kSfgeMap, kPflMse, kPflNll, kSpoPlus };

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);

// SFGE-MAP needs predictions that enter only the objective, linearly; SPO+
// additionally needs a linear objective in the decision (kKpValues).
bool MethodEligible(Method method, const ProblemSpec& problem);

struct TrainConfig {
  double lr = 0.005;
  int batch_size = 32;
  int samples = 1;  // S, predictions drawn per example
  int max_epochs = 500;
  int patience = 5;
  bool standardize_regret = true;
  double eps_std = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> grad_clip;  // max global gradient norm
  // Standardize targets per output with training-split statistics.
  bool target_scaling = true;

  // Throws ConfigError.
  void Validate() const;
  AdamConfig adam() const { return {lr, beta1, beta2, adam_eps}; }

  bool operator==(const TrainConfig&) const = default;
};

struct Example {
  Eigen::VectorXd x;
  std::vector<double> y;
  SolveResult full_info;  // z*(y); empty unless requested
};

std::vector<Example> MakeExamples(const ProblemSpec& problem,
                                  const Dataset& dataset,
                                  std::span<const int> indices,
                                  bool solve_full_info);

// (R − mean) / (population variance + eps). LengthError below 2 entries.
std::vector<double> StandardizeBatch(std::span<const double> losses,
                                     double eps = 1e-8);

// Task loss of a sampled prediction for one example.
using TaskLoss = std::function<double(
    const ProblemSpec& problem, std::span<const double> y_hat,
    const Example& example)>;

// Post-hoc regret.
double PregretLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   const Example& example);

// Regret(ŷ, y) + f(z*(y), ŷ) − f(z*(ŷ), ŷ). IneligibleProblem unless the
// predictions enter only the objective, linearly.
double SfgeMapLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y);
double SfgeMapLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y, const SolveResult& full_info);
double SfgeMapTaskLoss(const ProblemSpec& problem,
                       std::span<const double> y_hat, const Example& example);

// SPO+ surrogate max_z{f(z, y) − 2f(z, ŷ)} + 2f(z*(y), ŷ) − f(z*(y), y)
// and its subgradient 2(z*(2ŷ − y) − z*(y)) with respect to the predicted
// values. kKpValues only (IneligibleProblem otherwise).
double SpoPlusLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y, const SolveResult& full_info);
std::vector<double> SpoPlusSubgradient(const ProblemSpec& problem,
                                       std::span<const double> y_hat,
                                       std::span<const double> y,
                                       const SolveResult& full_info);

using Batch = std::vector<const Example*>;

struct SfgeEstimate {
  ParamGrad grad;
  std::vector<double> losses;  // raw, S per example in batch order
};

// Mini-batch SFGE gradient: mean over samples of L̃ · ∇ log p(ŷ), with L̃
// the (optionally standardized) task losses. Example k of the batch draws
// from the stream (config.seed, epoch, batch_index, k).
SfgeEstimate EstimateSfgeGradient(const GaussianPredictor& model,
                                  const ProblemSpec& problem,
                                  const Batch& batch,
                                  const TrainConfig& config,
                                  const TaskLoss& loss, std::uint64_t epoch,
                                  std::uint64_t batch_index);

struct StepStats {
  double mean_loss = 0.0;
  double grad_norm = 0.0;    // before clipping
  double update_norm = 0.0;  // applied parameter change
};

StepStats SfgeStep(GaussianPredictor& model, Adam& adam,
                   const ProblemSpec& problem, const Batch& batch,
                   const TrainConfig& config, const TaskLoss& loss,
                   std::uint64_t epoch, std::uint64_t batch_index);

// Mean-over-batch gradients of the prediction losses.
ParamGrad PflMseGradient(const GaussianPredictor& model, const Batch& batch);
ParamGrad PflNllGradient(const GaussianPredictor& model, const Batch& batch);
ParamGrad SpoPlusGradient(const GaussianPredictor& model,
                          const ProblemSpec& problem, const Batch& batch);

StepStats PflMseStep(GaussianPredictor& model, Adam& adam, const Batch& batch,
                     const TrainConfig& config);
StepStats PflNllStep(GaussianPredictor& model, Adam& adam, const Batch& batch,
                     const TrainConfig& config);
StepStats SpoPlusStep(GaussianPredictor& model, Adam& adam,
                      const ProblemSpec& problem, const Batch& batch,
                      const TrainConfig& config);

struct TrainTrace {
  double initial_val_loss = 0.0;
  std::vector<double> val_loss;    // one entry per completed epoch
  std::vector<double> train_loss;  // mean step loss per epoch
  std::vector<double> epoch_seconds;
  int best_epoch = 0;  // index into val_loss

  int epochs() const { return static_cast<int>(val_loss.size()); }
};

struct TrainResult {
  GaussianPredictor model;  // best-validation snapshot
  TrainTrace trace;
  double train_seconds = 0.0;
};

// Validation criterion: mean post-hoc regret of the mean prediction for the
// decision-focused methods, mean MSE for kPflMse, mean NLL for kPflNll.
double ValidationLoss(const GaussianPredictor& model,
                      const ProblemSpec& problem, Method method,
                      std::span<const Example> examples);

// Mini-batch training with early stopping on the validation criterion.
// Uses the dataset's current split. IneligibleProblem if the method does
// not apply to `problem`.
TrainResult Train(const ProblemSpec& problem, const Dataset& dataset,
                  Method method, const TrainConfig& config);

}  // namespace dfl

#endif  // DFL_TRAINER_H_
