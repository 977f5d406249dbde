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

// Linear Gaussian predictor: ŷ ~ N(Wx + b, diag(σ²)) with a trainable,
// input-independent σ = exp(log_sigma) + sigma_floor.

#ifndef DFL_PREDICTOR_H_
#define DFL_PREDICTOR_H_

#include <vector>

#include <Eigen/Dense>

#include "dfl/rng.h"

namespace dfl {

// Gradient (or Adam moment) with the predictor's parameter shapes.
struct ParamGrad {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
  Eigen::VectorXd log_sigma;

  static ParamGrad Zero(int output_dim, int input_dim);

  ParamGrad& operator+=(const ParamGrad& other);
  ParamGrad& operator*=(double scale);
  double SquaredNorm() const;

  // W row-major, then b, then log_sigma.
  Eigen::VectorXd Flatten() const;
};

// The trainable parameters act in standardized target units; a fixed
// per-output affine map (target_shift, target_scale) converts them to raw
// units. Identity by default.
struct GaussianPredictor {
  Eigen::MatrixXd w;  // d × p
  Eigen::VectorXd b;
  Eigen::VectorXd log_sigma;
  double sigma_floor = 1e-3;
  Eigen::VectorXd target_shift;
  Eigen::VectorXd target_scale;

  // W, b ~ Uniform[-0.01, 0.01]; log_sigma = 0; identity target map.
  static GaussianPredictor Init(int output_dim, int input_dim, Rng& rng);

  int output_dim() const { return static_cast<int>(w.rows()); }
  int input_dim() const { return static_cast<int>(w.cols()); }
  int num_params() const;

  // exp(log_sigma) + sigma_floor, in standardized units.
  Eigen::VectorXd Sigma() const;
  // target_scale ⊙ Sigma().
  Eigen::VectorXd RawSigma() const;

  // Same layout as ParamGrad::Flatten.
  Eigen::VectorXd FlatParams() const;
  void SetFlatParams(const Eigen::VectorXd& flat);

  bool operator==(const GaussianPredictor&) const;
};

// Sets target_shift / target_scale to the per-output mean and population
// standard deviation of `targets` (scale 1 where the spread is below 1e-8).
void FitTargetScaling(GaussianPredictor& model,
                      const std::vector<std::vector<double>>& targets);

// shift + scale ⊙ (Wx + b). Throws DimensionMismatch.
Eigen::VectorXd PredictMean(const GaussianPredictor& model,
                            const Eigen::VectorXd& x);

// μ + RawSigma()·η, η ~ N(0, I).
Eigen::VectorXd SamplePrediction(const GaussianPredictor& model,
                                 const Eigen::VectorXd& x, Rng& rng);

// log p_θ(y | x).
double LogProb(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y);

// ∇_θ log p_θ(y | x) with respect to (W, b, log_sigma).
ParamGrad ScoreGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

// Per-example squared error averaged over outputs: |μ − y|² / d, raw units.
double MseLoss(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y);
ParamGrad MseGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y);

// Negative log-likelihood and its gradient (= −ScoreGrad at the target).
double NllLoss(const GaussianPredictor& model, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y);
ParamGrad NllGrad(const GaussianPredictor& model, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y);

struct AdamConfig {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam on the predictor parameters; Step() descends along `grad`.
class Adam {
 public:
  Adam(const GaussianPredictor& model, AdamConfig config);

  // Returns the norm of the applied parameter change.
  double Step(GaussianPredictor& model, const ParamGrad& grad);

  int steps() const { return t_; }

 private:
  AdamConfig config_;
  ParamGrad m_;
  ParamGrad v_;
  int t_ = 0;
};

inline Eigen::VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace dfl

#endif  // DFL_PREDICTOR_H_
