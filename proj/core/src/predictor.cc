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

#include "dfl/predictor.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dfl/errors.h"

namespace dfl {
namespace {

void CheckDims(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd* y) {
  if (x.size() != model.input_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "feature length");
  }
  if (y != nullptr && y->size() != model.output_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "target length");
  }
}

}  // namespace

ParamGrad ParamGrad::Zero(int output_dim, int input_dim) {
  return ParamGrad{Eigen::MatrixXd::Zero(output_dim, input_dim),
                   Eigen::VectorXd::Zero(output_dim),
                   Eigen::VectorXd::Zero(output_dim)};
}

ParamGrad& ParamGrad::operator+=(const ParamGrad& other) {
  w += other.w;
  b += other.b;
  log_sigma += other.log_sigma;
  return *this;
}

ParamGrad& ParamGrad::operator*=(double scale) {
  w *= scale;
  b *= scale;
  log_sigma *= scale;
  return *this;
}

double ParamGrad::SquaredNorm() const {
  return w.squaredNorm() + b.squaredNorm() + log_sigma.squaredNorm();
}

Eigen::VectorXd ParamGrad::Flatten() const {
  const Eigen::Index d = w.rows();
  const Eigen::Index p = w.cols();
  Eigen::VectorXd flat(d * p + 2 * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) flat[j * p + k] = w(j, k);
  }
  flat.segment(d * p, d) = b;
  flat.segment(d * p + d, d) = log_sigma;
  return flat;
}

GaussianPredictor GaussianPredictor::Init(int output_dim, int input_dim,
                                          Rng& rng) {
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  GaussianPredictor model;
  model.w.resize(output_dim, input_dim);
  for (int j = 0; j < output_dim; ++j) {
    for (int k = 0; k < input_dim; ++k) model.w(j, k) = init(rng);
  }
  model.b.resize(output_dim);
  for (int j = 0; j < output_dim; ++j) model.b[j] = init(rng);
  model.log_sigma = Eigen::VectorXd::Zero(output_dim);
  model.target_shift = Eigen::VectorXd::Zero(output_dim);
  model.target_scale = Eigen::VectorXd::Ones(output_dim);
  return model;
}

void FitTargetScaling(GaussianPredictor& model,
                      const std::vector<std::vector<double>>& targets) {
  const int d = model.output_dim();
  if (targets.empty()) Fail(ErrorCode::kEmptyInput, "no targets to fit");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& y : targets) {
    if (static_cast<int>(y.size()) != d) {
      Fail(ErrorCode::kDimensionMismatch, "target length");
    }
    mean += ToEigen(y);
  }
  const double n = static_cast<double>(targets.size());
  mean /= n;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (const auto& y : targets) {
    var += (ToEigen(y) - mean).array().square().matrix();
  }
  var /= n;
  model.target_shift = mean;
  model.target_scale.resize(d);
  for (int j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j]);
    model.target_scale[j] = sd < 1e-8 ? 1.0 : sd;
  }
}

int GaussianPredictor::num_params() const {
  return output_dim() * input_dim() + 2 * output_dim();
}

Eigen::VectorXd GaussianPredictor::Sigma() const {
  return log_sigma.array().exp() + sigma_floor;
}

Eigen::VectorXd GaussianPredictor::RawSigma() const {
  return target_scale.cwiseProduct(Sigma());
}

Eigen::VectorXd GaussianPredictor::FlatParams() const {
  return ParamGrad{w, b, log_sigma}.Flatten();
}

void GaussianPredictor::SetFlatParams(const Eigen::VectorXd& flat) {
  const Eigen::Index d = w.rows();
  const Eigen::Index p = w.cols();
  if (flat.size() != d * p + 2 * d) {
    Fail(ErrorCode::kDimensionMismatch, "flat parameter length");
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) w(j, k) = flat[j * p + k];
  }
  b = flat.segment(d * p, d);
  log_sigma = flat.segment(d * p + d, d);
}

bool GaussianPredictor::operator==(const GaussianPredictor& other) const {
  return w == other.w && b == other.b && log_sigma == other.log_sigma &&
         sigma_floor == other.sigma_floor &&
         target_shift == other.target_shift &&
         target_scale == other.target_scale;
}

Eigen::VectorXd PredictMean(const GaussianPredictor& model,
                            const Eigen::VectorXd& x) {
  CheckDims(model, x, nullptr);
  return model.target_shift +
         model.target_scale.cwiseProduct(model.w * x + model.b);
}

Eigen::VectorXd SamplePrediction(const GaussianPredictor& model,
                                 const Eigen::VectorXd& x, Rng& rng) {
  Eigen::VectorXd y = PredictMean(model, x);
  const Eigen::VectorXd sigma = model.RawSigma();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < y.size(); ++j) y[j] += sigma[j] * normal(rng);
  return y;
}

double LogProb(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y) {
  CheckDims(model, x, &y);
  const Eigen::VectorXd mu = PredictMean(model, x);
  const Eigen::VectorXd sigma = model.RawSigma();
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double r = (y[j] - mu[j]) / sigma[j];
    total += -half_log_2pi - std::log(sigma[j]) - 0.5 * r * r;
  }
  return total;
}

ParamGrad ScoreGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  CheckDims(model, x, &y);
  // The raw density differs from the standardized one by a θ-free
  // Jacobian, so the score is taken in standardized units.
  const Eigen::VectorXd mu = model.w * x + model.b;
  const Eigen::VectorXd sigma = model.Sigma();
  ParamGrad g;
  g.b.resize(y.size());
  g.log_sigma.resize(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double u = (y[j] - model.target_shift[j]) / model.target_scale[j];
    const double r = u - mu[j];
    const double s = sigma[j];
    g.b[j] = r / (s * s);
    g.log_sigma[j] =
        (r * r / (s * s * s) - 1.0 / s) * std::exp(model.log_sigma[j]);
  }
  g.w = g.b * x.transpose();
  return g;
}

double MseLoss(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y) {
  CheckDims(model, x, &y);
  return (PredictMean(model, x) - y).squaredNorm() /
         static_cast<double>(y.size());
}

ParamGrad MseGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  CheckDims(model, x, &y);
  ParamGrad g;
  g.b = 2.0 * (PredictMean(model, x) - y).cwiseProduct(model.target_scale) /
        static_cast<double>(y.size());
  g.w = g.b * x.transpose();
  g.log_sigma = Eigen::VectorXd::Zero(y.size());
  return g;
}

double NllLoss(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y) {
  return -LogProb(model, x, y);
}

ParamGrad NllGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  ParamGrad g = ScoreGrad(model, x, y);
  g *= -1.0;
  return g;
}

Adam::Adam(const GaussianPredictor& model, AdamConfig config)
    : config_(config),
      m_(ParamGrad::Zero(model.output_dim(), model.input_dim())),
      v_(ParamGrad::Zero(model.output_dim(), model.input_dim())) {
  if (!(config_.lr > 0.0)) Fail(ErrorCode::kConfigError, "lr must be > 0");
}

double Adam::Step(GaussianPredictor& model, const ParamGrad& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, t_);
  const double c2 = 1.0 - std::pow(config_.beta2, t_);
  double sq_norm = 0.0;
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = config_.beta1 * m + (1.0 - config_.beta1) * g;
    v = config_.beta2 * v + (1.0 - config_.beta2) * g.cwiseProduct(g);
    const auto delta =
        (config_.lr * (m / c1).array() /
         ((v / c2).array().sqrt() + config_.eps))
            .matrix()
            .eval();
    param -= delta;
    sq_norm += delta.squaredNorm();
  };
  update(model.w, m_.w, v_.w, grad.w);
  update(model.b, m_.b, v_.b, grad.b);
  update(model.log_sigma, m_.log_sigma, v_.log_sigma, grad.log_sigma);
  return std::sqrt(sq_norm);
}

}  // namespace dfl
