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

#include "dfl/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dfl/errors.h"
#include "dfl/metrics.h"
#include "dfl/rng.h"

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool IsDecisionFocused(Method method) {
  return method == Method::kSfge || method == Method::kSfgeMap ||
         method == Method::kSpoPlus;
}

void RequireBatch(const Batch& batch) {
  if (batch.empty()) Fail(ErrorCode::kEmptyInput, "empty mini-batch");
}

void RequireMapEligible(const ProblemSpec& problem) {
  if (!problem.objective_linear_in_predictions()) {
    Fail(ErrorCode::kIneligibleProblem,
         std::string(ProblemKindName(problem.kind())) +
             " predicts more than objective coefficients");
  }
}

void RequireSpoEligible(const ProblemSpec& problem) {
  if (problem.kind() != ProblemKind::kKpValues) {
    Fail(ErrorCode::kIneligibleProblem,
         "SPO+ needs an objective linear in both decision and prediction");
  }
}

// Applies clipping, then one Adam step.
StepStats ApplyStep(GaussianPredictor& model, Adam& adam, ParamGrad grad,
                    const TrainConfig& config, double mean_loss) {
  StepStats stats;
  stats.mean_loss = mean_loss;
  stats.grad_norm = std::sqrt(grad.SquaredNorm());
  if (config.grad_clip && stats.grad_norm > *config.grad_clip) {
    grad *= *config.grad_clip / stats.grad_norm;
  }
  stats.update_norm = adam.Step(model, grad);
  return stats;
}

template <typename PerExample>
ParamGrad MeanGradient(const GaussianPredictor& model, const Batch& batch,
                       PerExample per_example) {
  RequireBatch(batch);
  ParamGrad total = ParamGrad::Zero(model.output_dim(), model.input_dim());
  for (const Example* ex : batch) total += per_example(*ex);
  total *= 1.0 / static_cast<double>(batch.size());
  return total;
}

double MeanLoss(const Batch& batch,
                const std::function<double(const Example&)>& loss) {
  double sum = 0.0;
  for (const Example* ex : batch) sum += loss(*ex);
  return sum / static_cast<double>(batch.size());
}

std::vector<Batch> MakeBatches(const std::vector<Example>& examples,
                               int batch_size, Rng& rng) {
  std::vector<int> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Batch> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    Batch batch;
    const std::size_t end =
        std::min(order.size(), start + static_cast<std::size_t>(batch_size));
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(&examples[order[k]]);
    }
    batches.push_back(std::move(batch));
  }
  // A trailing singleton cannot be standardized; fold it into its
  // predecessor.
  if (batches.size() > 1 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kSfge:
      return "sfge";
    case Method::kSfgeMap:
      return "sfge_map";
    case Method::kPflMse:
      return "pfl_mse";
    case Method::kPflNll:
      return "pfl_nll";
    case Method::kSpoPlus:
      return "spo_plus";
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (Method m : {Method::kSfge, Method::kSfgeMap, Method::kPflMse,
                   Method::kPflNll, Method::kSpoPlus}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

bool MethodEligible(Method method, const ProblemSpec& problem) {
  switch (method) {
    case Method::kSfgeMap:
      return problem.objective_linear_in_predictions();
    case Method::kSpoPlus:
      return problem.kind() == ProblemKind::kKpValues;
    default:
      return true;
  }
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) Fail(ErrorCode::kConfigError, what);
  };
  require(lr > 0.0, "lr must be > 0");
  require(samples >= 1, "samples must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(!standardize_regret || batch_size >= 2,
          "batch_size must be >= 2 when standardizing");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(patience >= 0, "patience must be >= 0");
  require(eps_std >= 0.0, "eps_std must be >= 0");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          "Adam betas must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be > 0");
  require(!grad_clip || *grad_clip > 0.0, "grad_clip must be > 0");
}

std::vector<Example> MakeExamples(const ProblemSpec& problem,
                                  const Dataset& dataset,
                                  std::span<const int> indices,
                                  bool solve_full_info) {
  std::vector<Example> out;
  out.reserve(indices.size());
  for (int idx : indices) {
    const Instance& inst = dataset.instances.at(idx);
    if (static_cast<int>(inst.y.size()) != problem.output_dim()) {
      Fail(ErrorCode::kDimensionMismatch, "instance target length");
    }
    Example ex;
    ex.x = ToEigen(inst.x);
    ex.y = inst.y;
    if (solve_full_info) {
      ex.full_info = RequireOptimal(problem.Solve(inst.y), "full-information");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<double> StandardizeBatch(std::span<const double> losses,
                                     double eps) {
  if (losses.size() < 2) {
    Fail(ErrorCode::kLengthError, "standardization needs >= 2 losses");
  }
  const double n = static_cast<double>(losses.size());
  double mean = 0.0;
  for (double r : losses) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : losses) var += (r - mean) * (r - mean);
  var /= n;
  std::vector<double> out(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out[i] = (losses[i] - mean) / (var + eps);
  }
  return out;
}

double PregretLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   const Example& example) {
  return PostHocRegret(problem, y_hat, example.y, example.full_info).pregret;
}

double SfgeMapLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y) {
  RequireMapEligible(problem);
  return SfgeMapLoss(problem, y_hat, y,
                     RequireOptimal(problem.Solve(y), "full-information"));
}

double SfgeMapLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y, const SolveResult& full_info) {
  RequireMapEligible(problem);
  const SolveResult predicted =
      RequireOptimal(problem.Solve(y_hat), "first-stage");
  const double regret =
      problem.Objective(predicted.decision, y) - full_info.objective;
  const double gap = problem.Objective(full_info.decision, y_hat) -
                     problem.Objective(predicted.decision, y_hat);
  return regret + gap;
}

double SfgeMapTaskLoss(const ProblemSpec& problem,
                       std::span<const double> y_hat, const Example& example) {
  return SfgeMapLoss(problem, y_hat, example.y, example.full_info);
}

namespace {

std::vector<double> Reflected(std::span<const double> y_hat,
                              std::span<const double> y) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = 2.0 * y_hat[i] - y[i];
  return out;
}

}  // namespace

double SpoPlusLoss(const ProblemSpec& problem, std::span<const double> y_hat,
                   std::span<const double> y, const SolveResult& full_info) {
  RequireSpoEligible(problem);
  const std::vector<double> reflected = Reflected(y_hat, y);
  const SolveResult z_tilde =
      RequireOptimal(problem.Solve(reflected), "SPO+ inner");
  // max_z f(z, y − 2ŷ) = −min_z f(z, 2ŷ − y) by linearity in the parameters.
  return -z_tilde.objective + 2.0 * problem.Objective(full_info.decision,
                                                      y_hat) -
         full_info.objective;
}

std::vector<double> SpoPlusSubgradient(const ProblemSpec& problem,
                                       std::span<const double> y_hat,
                                       std::span<const double> y,
                                       const SolveResult& full_info) {
  RequireSpoEligible(problem);
  const SolveResult z_tilde =
      RequireOptimal(problem.Solve(Reflected(y_hat, y)), "SPO+ inner");
  // ∂f(z, ŷ)/∂ŷ = −z for the negated knapsack objective.
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    g[i] = 2.0 * (z_tilde.decision[static_cast<int>(i)] -
                  full_info.decision[static_cast<int>(i)]);
  }
  return g;
}

SfgeEstimate EstimateSfgeGradient(const GaussianPredictor& model,
                                  const ProblemSpec& problem,
                                  const Batch& batch,
                                  const TrainConfig& config,
                                  const TaskLoss& loss, std::uint64_t epoch,
                                  std::uint64_t batch_index) {
  RequireBatch(batch);
  const int s_count = config.samples;
  const std::size_t total = batch.size() * static_cast<std::size_t>(s_count);
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(total);
  SfgeEstimate est;
  est.losses.reserve(total);
  for (std::size_t k = 0; k < batch.size(); ++k) {
    Rng rng = MakeRng(config.seed, {kStreamSample, epoch, batch_index, k});
    for (int s = 0; s < s_count; ++s) {
      draws.push_back(SamplePrediction(model, batch[k]->x, rng));
      const Eigen::VectorXd& y_hat = draws.back();
      est.losses.push_back(loss(
          problem,
          std::span<const double>(y_hat.data(),
                                  static_cast<std::size_t>(y_hat.size())),
          *batch[k]));
    }
  }
  std::vector<double> weights = est.losses;
  if (config.standardize_regret && total >= 2) {
    weights = StandardizeBatch(est.losses, config.eps_std);
  }
  est.grad = ParamGrad::Zero(model.output_dim(), model.input_dim());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    for (int s = 0; s < s_count; ++s) {
      const std::size_t i = k * s_count + s;
      if (weights[i] == 0.0) continue;
      ParamGrad score = ScoreGrad(model, batch[k]->x, draws[i]);
      score *= weights[i];
      est.grad += score;
    }
  }
  est.grad *= 1.0 / static_cast<double>(total);
  return est;
}

StepStats SfgeStep(GaussianPredictor& model, Adam& adam,
                   const ProblemSpec& problem, const Batch& batch,
                   const TrainConfig& config, const TaskLoss& loss,
                   std::uint64_t epoch, std::uint64_t batch_index) {
  SfgeEstimate est = EstimateSfgeGradient(model, problem, batch, config, loss,
                                          epoch, batch_index);
  const double mean_loss =
      std::accumulate(est.losses.begin(), est.losses.end(), 0.0) /
      static_cast<double>(est.losses.size());
  return ApplyStep(model, adam, std::move(est.grad), config, mean_loss);
}

ParamGrad PflMseGradient(const GaussianPredictor& model, const Batch& batch) {
  return MeanGradient(model, batch, [&](const Example& ex) {
    return MseGrad(model, ex.x, ToEigen(ex.y));
  });
}

ParamGrad PflNllGradient(const GaussianPredictor& model, const Batch& batch) {
  return MeanGradient(model, batch, [&](const Example& ex) {
    return NllGrad(model, ex.x, ToEigen(ex.y));
  });
}

ParamGrad SpoPlusGradient(const GaussianPredictor& model,
                          const ProblemSpec& problem, const Batch& batch) {
  RequireSpoEligible(problem);
  return MeanGradient(model, batch, [&](const Example& ex) {
    const Eigen::VectorXd mu = PredictMean(model, ex.x);
    const std::vector<double> g = SpoPlusSubgradient(
        problem, std::span<const double>(mu.data(), mu.size()), ex.y,
        ex.full_info);
    ParamGrad out;
    out.b = ToEigen(g).cwiseProduct(model.target_scale);
    out.w = out.b * ex.x.transpose();
    out.log_sigma = Eigen::VectorXd::Zero(model.output_dim());
    return out;
  });
}

StepStats PflMseStep(GaussianPredictor& model, Adam& adam, const Batch& batch,
                     const TrainConfig& config) {
  ParamGrad grad = PflMseGradient(model, batch);
  const double loss = MeanLoss(batch, [&](const Example& ex) {
    return MseLoss(model, ex.x, ToEigen(ex.y));
  });
  return ApplyStep(model, adam, std::move(grad), config, loss);
}

StepStats PflNllStep(GaussianPredictor& model, Adam& adam, const Batch& batch,
                     const TrainConfig& config) {
  ParamGrad grad = PflNllGradient(model, batch);
  const double loss = MeanLoss(batch, [&](const Example& ex) {
    return NllLoss(model, ex.x, ToEigen(ex.y));
  });
  return ApplyStep(model, adam, std::move(grad), config, loss);
}

StepStats SpoPlusStep(GaussianPredictor& model, Adam& adam,
                      const ProblemSpec& problem, const Batch& batch,
                      const TrainConfig& config) {
  ParamGrad grad = SpoPlusGradient(model, problem, batch);
  const double loss = MeanLoss(batch, [&](const Example& ex) {
    const Eigen::VectorXd mu = PredictMean(model, ex.x);
    return SpoPlusLoss(problem, std::span<const double>(mu.data(), mu.size()),
                       ex.y, ex.full_info);
  });
  return ApplyStep(model, adam, std::move(grad), config, loss);
}

double ValidationLoss(const GaussianPredictor& model,
                      const ProblemSpec& problem, Method method,
                      std::span<const Example> examples) {
  if (examples.empty()) Fail(ErrorCode::kEmptyInput, "empty validation set");
  double sum = 0.0;
  for (const Example& ex : examples) {
    switch (method) {
      case Method::kPflMse:
        sum += MseLoss(model, ex.x, ToEigen(ex.y));
        break;
      case Method::kPflNll:
        sum += NllLoss(model, ex.x, ToEigen(ex.y));
        break;
      default: {
        const Eigen::VectorXd mu = PredictMean(model, ex.x);
        sum += PostHocRegret(problem,
                             std::span<const double>(mu.data(), mu.size()),
                             ex.y, ex.full_info)
                   .pregret;
      }
    }
  }
  return sum / static_cast<double>(examples.size());
}

TrainResult Train(const ProblemSpec& problem, const Dataset& dataset,
                  Method method, const TrainConfig& config) {
  config.Validate();
  if (!MethodEligible(method, problem)) {
    Fail(ErrorCode::kIneligibleProblem,
         std::string(MethodName(method)) + " does not apply to " +
             std::string(ProblemKindName(problem.kind())));
  }
  const auto start = Clock::now();
  const bool dfl = IsDecisionFocused(method);
  const std::vector<Example> train =
      MakeExamples(problem, dataset, dataset.split.train, dfl);
  const std::vector<Example> val =
      MakeExamples(problem, dataset, dataset.split.val, dfl);
  if (train.empty()) Fail(ErrorCode::kEmptyInput, "empty training split");

  Rng init_rng = MakeRng(config.seed, {kStreamInit});
  TrainResult result;
  GaussianPredictor model = GaussianPredictor::Init(
      problem.output_dim(), dataset.config.p, init_rng);
  if (config.target_scaling) {
    std::vector<std::vector<double>> targets;
    for (int i : dataset.split.train) targets.push_back(dataset.instances[i].y);
    FitTargetScaling(model, targets);
  }
  Adam adam(model, config.adam());
  const TaskLoss task_loss =
      method == Method::kSfgeMap ? TaskLoss(SfgeMapTaskLoss)
                                 : TaskLoss(PregretLoss);

  TrainTrace& trace = result.trace;
  trace.initial_val_loss = ValidationLoss(model, problem, method, val);
  double best = std::numeric_limits<double>::infinity();
  result.model = model;
  int since_improvement = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    Rng shuffle_rng = MakeRng(
        config.seed, {kStreamShuffle, static_cast<std::uint64_t>(epoch)});
    const std::vector<Batch> batches =
        MakeBatches(train, config.batch_size, shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      StepStats stats;
      switch (method) {
        case Method::kSfge:
        case Method::kSfgeMap:
          stats = SfgeStep(model, adam, problem, batches[b], config,
                           task_loss, static_cast<std::uint64_t>(epoch), b);
          break;
        case Method::kPflMse:
          stats = PflMseStep(model, adam, batches[b], config);
          break;
        case Method::kPflNll:
          stats = PflNllStep(model, adam, batches[b], config);
          break;
        case Method::kSpoPlus:
          stats = SpoPlusStep(model, adam, problem, batches[b], config);
          break;
      }
      loss_sum += stats.mean_loss;
    }
    const double val_loss = ValidationLoss(model, problem, method, val);
    trace.val_loss.push_back(val_loss);
    trace.train_loss.push_back(loss_sum / static_cast<double>(batches.size()));
    trace.epoch_seconds.push_back(SecondsSince(epoch_start));
    if (val_loss < best) {
      best = val_loss;
      trace.best_epoch = trace.epochs() - 1;
      result.model = model;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (since_improvement >= config.patience) break;
  }
  result.train_seconds = SecondsSince(start);
  return result;
}

}  // namespace dfl
