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
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dfl/errors.h"
#include "dfl/predictor.h"
#include "dfl/rng.h"

namespace dfl {
namespace {

GaussianPredictor RandomModel(int d, int p, Rng& rng, bool scaled) {
  GaussianPredictor model = GaussianPredictor::Init(d, p, rng);
  std::normal_distribution<double> normal;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < p; ++k) model.w(j, k) = 0.5 * normal(rng);
    model.b[j] = normal(rng);
    model.log_sigma[j] = 0.3 * normal(rng);
    if (scaled) {
      model.target_shift[j] = 5.0 * normal(rng);
      model.target_scale[j] = 0.5 + std::abs(3.0 * normal(rng));
    }
  }
  return model;
}

Eigen::VectorXd RandomVector(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * normal(rng);
  return v;
}

// Central finite differences of f over the flat parameter vector.
Eigen::VectorXd FiniteDifference(
    const GaussianPredictor& model,
    const std::function<double(const GaussianPredictor&)>& f, double h) {
  const Eigen::VectorXd theta = model.FlatParams();
  Eigen::VectorXd grad(theta.size());
  GaussianPredictor probe = model;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd t = theta;
    t[i] += h;
    probe.SetFlatParams(t);
    const double up = f(probe);
    t[i] -= 2.0 * h;
    probe.SetFlatParams(t);
    const double down = f(probe);
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double MaxRelError(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) /
                                std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

class GradientTest : public ::testing::TestWithParam<bool> {};

TEST_P(GradientTest, ScoreMatchesFiniteDifferenceOfLogProb) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianPredictor model = RandomModel(3, 4, rng, GetParam());
    const Eigen::VectorXd x = RandomVector(4, rng);
    const Eigen::VectorXd y =
        PredictMean(model, x) + RandomVector(3, rng, 2.0);
    const Eigen::VectorXd fd = FiniteDifference(
        model, [&](const GaussianPredictor& m) { return LogProb(m, x, y); },
        1e-6);
    EXPECT_LT(MaxRelError(ScoreGrad(model, x, y).Flatten(), fd), 1e-5);
  }
}

TEST_P(GradientTest, MseAndNllMatchFiniteDifferences) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianPredictor model = RandomModel(3, 4, rng, GetParam());
    const Eigen::VectorXd x = RandomVector(4, rng);
    const Eigen::VectorXd y = RandomVector(3, rng, 4.0);
    const Eigen::VectorXd fd_mse = FiniteDifference(
        model, [&](const GaussianPredictor& m) { return MseLoss(m, x, y); },
        1e-5);
    EXPECT_LT(MaxRelError(MseGrad(model, x, y).Flatten(), fd_mse), 1e-6);
    const Eigen::VectorXd fd_nll = FiniteDifference(
        model, [&](const GaussianPredictor& m) { return NllLoss(m, x, y); },
        1e-5);
    EXPECT_LT(MaxRelError(NllGrad(model, x, y).Flatten(), fd_nll), 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(TargetScaling, GradientTest, ::testing::Bool());

TEST(PredictorTest, ScoreHasZeroMeanUnderModel) {
  Rng rng(3);
  const GaussianPredictor model = RandomModel(2, 3, rng, true);
  const Eigen::VectorXd x = RandomVector(3, rng);
  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.num_params());
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(model.num_params());
  for (int s = 0; s < n; ++s) {
    const Eigen::VectorXd g =
        ScoreGrad(model, x, SamplePrediction(model, x, rng)).Flatten();
    sum += g;
    sq += g.cwiseProduct(g);
  }
  for (int i = 0; i < model.num_params(); ++i) {
    const double mean = sum[i] / n;
    const double sd = std::sqrt(std::max(0.0, sq[i] / n - mean * mean));
    EXPECT_LT(std::abs(mean), 4.0 * sd / std::sqrt(double(n)) + 1e-12)
        << "parameter " << i;
  }
}

TEST(PredictorTest, SamplesMatchMeanAndRawSigma) {
  Rng rng(4);
  const GaussianPredictor model = RandomModel(2, 3, rng, true);
  const Eigen::VectorXd x = RandomVector(3, rng);
  const Eigen::VectorXd mu = PredictMean(model, x);
  const Eigen::VectorXd sigma = model.RawSigma();
  const int n = 50000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(2);
  for (int s = 0; s < n; ++s) {
    const Eigen::VectorXd y = SamplePrediction(model, x, rng) - mu;
    sum += y;
    sq += y.cwiseProduct(y);
  }
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(sum[j] / n, 0.0, 4.0 * sigma[j] / std::sqrt(double(n)));
    EXPECT_NEAR(std::sqrt(sq[j] / n), sigma[j], 0.02 * sigma[j]);
  }
}

TEST(PredictorTest, AffineTargetMapIsApplied) {
  Rng rng(5);
  GaussianPredictor model = GaussianPredictor::Init(2, 2, rng);
  model.w.setZero();
  model.b << 1.0, -2.0;
  model.log_sigma << 0.0, std::log(2.0);
  model.target_shift << 10.0, 0.0;
  model.target_scale << 3.0, 0.5;
  const Eigen::VectorXd mu = PredictMean(model, Eigen::VectorXd::Zero(2));
  EXPECT_DOUBLE_EQ(mu[0], 13.0);
  EXPECT_DOUBLE_EQ(mu[1], -1.0);
  EXPECT_DOUBLE_EQ(model.RawSigma()[0], 3.0 * (1.0 + 1e-3));
  EXPECT_DOUBLE_EQ(model.RawSigma()[1], 0.5 * (2.0 + 1e-3));
}

TEST(PredictorTest, FitTargetScalingUsesPopulationMoments) {
  Rng rng(6);
  GaussianPredictor model = GaussianPredictor::Init(2, 1, rng);
  FitTargetScaling(model, {{1.0, 4.0}, {3.0, 4.0}});
  EXPECT_DOUBLE_EQ(model.target_shift[0], 2.0);
  EXPECT_DOUBLE_EQ(model.target_scale[0], 1.0);
  EXPECT_DOUBLE_EQ(model.target_shift[1], 4.0);
  EXPECT_DOUBLE_EQ(model.target_scale[1], 1.0);  // constant column
  FitTargetScaling(model, {{0.0, 0.0}, {10.0, 0.0}});
  EXPECT_DOUBLE_EQ(model.target_scale[0], 5.0);
  EXPECT_THROW(FitTargetScaling(model, {}), DflError);
  EXPECT_THROW(FitTargetScaling(model, {{1.0}}), DflError);
}

TEST(PredictorTest, SigmaStaysAboveFloorUnderAdam) {
  Rng rng(7);
  GaussianPredictor model = GaussianPredictor::Init(2, 2, rng);
  Adam adam(model, AdamConfig{0.05});
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(2);
  for (int step = 0; step < 3000; ++step) {
    // Exact targets drive log_sigma toward -inf.
    adam.Step(model, NllGrad(model, x, PredictMean(model, x)));
    for (int j = 0; j < 2; ++j) ASSERT_GE(model.Sigma()[j], 1e-3);
  }
  EXPECT_EQ(adam.steps(), 3000);
  EXPECT_LT(model.Sigma().maxCoeff(), 0.5);
}

TEST(PredictorTest, AdamReportsUpdateNorm) {
  Rng rng(8);
  GaussianPredictor model = GaussianPredictor::Init(1, 1, rng);
  const Eigen::VectorXd before = model.FlatParams();
  Adam adam(model, AdamConfig{0.1});
  ParamGrad g = ParamGrad::Zero(1, 1);
  g.w(0, 0) = 3.0;
  g.b[0] = -1.0;
  const double norm = adam.Step(model, g);
  // First bias-corrected step moves each nonzero coordinate by lr.
  EXPECT_NEAR(norm, 0.1 * std::sqrt(2.0), 1e-6);
  EXPECT_NEAR((model.FlatParams() - before).norm(), norm, 1e-12);
  EXPECT_THROW(Adam(model, AdamConfig{0.0}), DflError);
}

TEST(PredictorTest, FlatParamsRoundTrip) {
  Rng rng(9);
  GaussianPredictor model = RandomModel(3, 2, rng, true);
  GaussianPredictor copy = model;
  copy.SetFlatParams(model.FlatParams());
  EXPECT_TRUE(copy == model);
  EXPECT_THROW(copy.SetFlatParams(Eigen::VectorXd::Zero(3)), DflError);
  EXPECT_THROW(PredictMean(model, Eigen::VectorXd::Zero(5)), DflError);
}

}  // namespace
}  // namespace dfl
