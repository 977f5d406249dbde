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

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dfl/datagen.h"
#include "dfl/errors.h"
#include "dfl/metrics.h"
#include "dfl/predictor.h"
#include "dfl/problems.h"
#include "dfl/trainer.h"
#include "test_util.h"

namespace dfl {
namespace {

GenConfig SmallGen(int n_items, int n_instances) {
  GenConfig config;
  config.n_items = n_items;
  config.n_instances = n_instances;
  config.probe_samples = 500;
  return config;
}

std::vector<double> RandomValues(int n, std::mt19937_64& rng, double lo,
                                 double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

TEST(TrainerTest, StandardizeBatchHandValues) {
  const std::vector<double> losses = {1.0, 2.0, 3.0};
  const std::vector<double> out = StandardizeBatch(losses, 0.0);
  // Population variance 2/3.
  EXPECT_DOUBLE_EQ(out[0], -1.5);
  EXPECT_DOUBLE_EQ(out[1], 0.0);
  EXPECT_DOUBLE_EQ(out[2], 1.5);
  const std::vector<double> flat = StandardizeBatch(std::vector<double>{4, 4});
  EXPECT_EQ(flat[0], 0.0);
  EXPECT_EQ(flat[1], 0.0);
  try {
    StandardizeBatch(std::vector<double>{1.0});
    FAIL();
  } catch (const DflError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthError);
  }
}

TEST(TrainerTest, StandardizedLossesHaveZeroMean) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> losses = RandomValues(32, rng, 0.0, 50.0);
    const std::vector<double> out = StandardizeBatch(losses);
    double sum = 0.0;
    for (double v : out) sum += v;
    EXPECT_NEAR(sum, 0.0, 1e-9);
  }
}

TEST(TrainerTest, MapLossBoundsRegretAndVanishesAtTruth) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    StaticData data = testing::RandomKpStatic(8, rng);
    const ProblemSpec spec(ProblemKind::kKpValues, data, 0.0);
    const std::vector<double> y = RandomValues(8, rng, 1.0, 15.0);
    const std::vector<double> y_hat = RandomValues(8, rng, -5.0, 20.0);
    const double map = SfgeMapLoss(spec, y_hat, y);
    const double regret = Regret(spec, y_hat, y);
    EXPECT_GE(map, regret - 1e-9);
    EXPECT_NEAR(SfgeMapLoss(spec, y, y), 0.0, 1e-9);
    // The surrogate gap is positively homogeneous in the prediction.
    std::vector<double> scaled(y_hat);
    for (double& v : scaled) v *= 3.0;
    EXPECT_NEAR(SfgeMapLoss(spec, scaled, y) - regret, 3.0 * (map - regret),
                1e-7 * std::max(1.0, map));
  }
}

TEST(TrainerTest, SpoPlusIsZeroAtTruthAndConvex) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    StaticData data = testing::RandomKpStatic(8, rng);
    const ProblemSpec spec(ProblemKind::kKpValues, data, 0.0);
    const std::vector<double> y = RandomValues(8, rng, 1.0, 15.0);
    const SolveResult full = spec.Solve(y);
    EXPECT_NEAR(SpoPlusLoss(spec, y, y, full), 0.0, 1e-9);
    const std::vector<double> a = RandomValues(8, rng, -5.0, 20.0);
    const std::vector<double> b = RandomValues(8, rng, -5.0, 20.0);
    const double la = SpoPlusLoss(spec, a, y, full);
    EXPECT_GE(la, Regret(spec, a, y) - 1e-9);
    // Subgradient inequality: L(b) >= L(a) + g(a)·(b - a).
    const std::vector<double> g = SpoPlusSubgradient(spec, a, y, full);
    double linear = la;
    for (int i = 0; i < 8; ++i) linear += g[i] * (b[i] - a[i]);
    EXPECT_GE(SpoPlusLoss(spec, b, y, full), linear - 1e-7);
  }
}

TEST(TrainerTest, SurrogatesRejectIneligibleProblems) {
  std::mt19937_64 rng(4);
  const StaticData data = testing::RandomKpStatic(4, rng);
  const ProblemSpec weights(ProblemKind::kKpWeights, data, 2.0);
  const std::vector<double> y = {3, 3, 3, 3};
  try {
    SfgeMapLoss(weights, y, y);
    FAIL();
  } catch (const DflError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIneligibleProblem);
  }
  EXPECT_FALSE(MethodEligible(Method::kSfgeMap, weights));
  EXPECT_FALSE(MethodEligible(Method::kSpoPlus, weights));
  EXPECT_TRUE(MethodEligible(Method::kSfge, weights));
  EXPECT_TRUE(MethodEligible(Method::kPflNll, weights));

  const Dataset ds =
      BuildDataset(SmallGen(4, 40), ProblemKind::kKpQuadratic, 1);
  TrainConfig config;
  config.max_epochs = 1;
  try {
    Train(MakeProblem(ds, 0.0), ds, Method::kSpoPlus, config);
    FAIL();
  } catch (const DflError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIneligibleProblem);
  }
}

TEST(TrainerTest, MethodNamesRoundTrip) {
  for (Method m : {Method::kSfge, Method::kSfgeMap, Method::kPflMse,
                   Method::kPflNll, Method::kSpoPlus}) {
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  }
  EXPECT_FALSE(ParseMethod("sgd").has_value());
}

TEST(TrainerTest, ZeroPatienceStopsAfterOneEpoch) {
  const Dataset ds = BuildDataset(SmallGen(5, 60), ProblemKind::kKpValues, 2);
  TrainConfig config;
  config.patience = 0;
  const TrainResult r =
      Train(MakeProblem(ds, 0.0), ds, Method::kPflMse, config);
  EXPECT_EQ(r.trace.epochs(), 1);
  EXPECT_EQ(r.trace.best_epoch, 0);
}

TEST(TrainerTest, TrainingIsDeterministic) {
  const Dataset ds =
      BuildDataset(SmallGen(6, 100), ProblemKind::kKpWeights, 3);
  const ProblemSpec spec = MakeProblem(ds, 5.0);
  TrainConfig config;
  config.max_epochs = 4;
  config.seed = 99;
  for (Method m : {Method::kSfge, Method::kPflNll}) {
    const TrainResult a = Train(spec, ds, m, config);
    const TrainResult b = Train(spec, ds, m, config);
    EXPECT_TRUE(a.model == b.model);
    EXPECT_EQ(a.trace.val_loss, b.trace.val_loss);
    config.seed = 100;
    const TrainResult c = Train(spec, ds, m, config);
    EXPECT_FALSE(a.model == c.model);
    config.seed = 99;
  }
}

TEST(TrainerTest, SfgeReducesValidationPregret) {
  const Dataset ds =
      BuildDataset(SmallGen(10, 400), ProblemKind::kKpWeights, 4);
  const ProblemSpec spec = MakeProblem(ds, 10.0);
  TrainConfig config;
  config.max_epochs = 40;
  config.patience = 40;
  config.seed = 5;
  const TrainResult r = Train(spec, ds, Method::kSfge, config);
  const double best = r.trace.val_loss[r.trace.best_epoch];
  EXPECT_LE(best, 0.8 * r.trace.initial_val_loss)
      << "initial " << r.trace.initial_val_loss << " best " << best;
}

TEST(TrainerTest, PflMseRecoversNoiseFreeLinearMap) {
  GenConfig gen = SmallGen(4, 300);
  gen.deg = 1;
  gen.noise_halfwidth = 0.0;
  const Dataset ds = BuildDataset(gen, ProblemKind::kKpValues, 5);
  TrainConfig config;
  config.max_epochs = 400;
  config.patience = 400;
  config.lr = 0.02;
  const TrainResult r =
      Train(MakeProblem(ds, 0.0), ds, Method::kPflMse, config);
  EXPECT_LT(r.trace.val_loss[r.trace.best_epoch], 1e-4);
}

TEST(TrainerTest, NllLearnsPoissonSpread) {
  // Targets independent of x with variance 9.
  std::mt19937_64 rng(6);
  std::poisson_distribution<int> poisson(9.0);
  std::normal_distribution<double> normal;
  std::vector<Example> examples(2000);
  for (Example& ex : examples) {
    ex.x = Eigen::VectorXd(2);
    ex.x << normal(rng), normal(rng);
    ex.y = {static_cast<double>(poisson(rng))};
  }
  GaussianPredictor model = GaussianPredictor::Init(1, 2, rng);
  TrainConfig config;
  config.lr = 0.02;
  Adam adam(model, config.adam());
  std::uniform_int_distribution<int> pick(0, 1999);
  for (int step = 0; step < 4000; ++step) {
    Batch batch;
    for (int k = 0; k < 32; ++k) batch.push_back(&examples[pick(rng)]);
    PflNllStep(model, adam, batch, config);
  }
  EXPECT_NEAR(model.RawSigma()[0], 3.0, 0.3);
  EXPECT_NEAR(PredictMean(model, Eigen::VectorXd::Zero(2))[0], 9.0, 0.3);
}

TEST(TrainerTest, SfgeGradientIgnoresConstantLosses) {
  std::mt19937_64 rng(7);
  const StaticData data = testing::RandomKpStatic(4, rng);
  const ProblemSpec spec(ProblemKind::kKpValues, data, 0.0);
  GaussianPredictor model = GaussianPredictor::Init(4, 2, rng);
  std::vector<Example> examples(8);
  for (Example& ex : examples) {
    ex.x = Eigen::VectorXd::Ones(2);
    ex.y = {1, 2, 3, 4};
  }
  Batch batch;
  for (const Example& ex : examples) batch.push_back(&ex);
  TrainConfig config;
  const TaskLoss constant = [](const ProblemSpec&, std::span<const double>,
                               const Example&) { return 7.0; };
  const SfgeEstimate est =
      EstimateSfgeGradient(model, spec, batch, config, constant, 1, 0);
  EXPECT_EQ(est.grad.SquaredNorm(), 0.0);
  EXPECT_EQ(est.losses.size(), 8u);
}

TEST(TrainerTest, ConfigValidation) {
  TrainConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.batch_size = 1;
  EXPECT_THROW(config.Validate(), DflError);
  config.standardize_regret = false;
  EXPECT_NO_THROW(config.Validate());
  config = {};
  config.samples = 0;
  EXPECT_THROW(config.Validate(), DflError);
  config = {};
  config.grad_clip = -1.0;
  EXPECT_THROW(config.Validate(), DflError);
}

}  // namespace
}  // namespace dfl
