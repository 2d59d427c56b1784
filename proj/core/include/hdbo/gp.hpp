// Copyright 2026 The hdbo Authors. All Rights Reserved.
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
// =============================================================================

#ifndef HDBO_GP_HPP_
#define HDBO_GP_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace hdbo::gp {

enum class KernelFamily { kSquaredExponential, kLinear };

/// Covariance function configuration. The linear kernel ignores both
/// lengthscale and signal_variance.
struct KernelConfig {
  KernelFamily family = KernelFamily::kSquaredExponential;
  double lengthscale = 1.0;
  double signal_variance = 1.0;

  void Validate() const;

  static KernelConfig SquaredExponential(double lengthscale, double signal_variance = 1.0) {
    return {KernelFamily::kSquaredExponential, lengthscale, signal_variance};
  }
  static KernelConfig Linear() { return {KernelFamily::kLinear, 1.0, 1.0}; }
};

/// Raised when K + noise^2 I cannot be factorized even after the largest
/// jitter has been added.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double final_jitter)
      : std::runtime_error(what), final_jitter_(final_jitter) {}
  double final_jitter() const { return final_jitter_; }

 private:
  double final_jitter_;
};

double KernelEval(const KernelConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& v);

/// Cross-covariance between the rows of `a` (n x d) and the rows of `b` (m x d).
Eigen::MatrixXd KernelMatrix(const KernelConfig& cfg, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b);

/// Symmetric Gram matrix of the rows of `a`, evaluated entry by entry with
/// KernelEval so repeated construction is bit-identical.
Eigen::MatrixXd GramMatrix(const KernelConfig& cfg, const Eigen::MatrixXd& a);

struct PosteriorPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

enum class MeanPolicy {
  kSampleMean,  // centre targets by their mean, add it back at prediction
  kZero,
};

/// Exact GP regression model. Immutable once fitted; prediction is safe to
/// call from several threads.
class GpModel {
 public:
  GpModel() = default;

  const KernelConfig& kernel() const { return kernel_; }
  double noise_std() const { return noise_std_; }
  double jitter() const { return jitter_; }
  double target_offset() const { return target_offset_; }
  int size() const { return static_cast<int>(inputs_.rows()); }
  int dim() const { return static_cast<int>(inputs_.cols()); }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }

  /// Lower-triangular L with L L^T = K + (noise^2 + jitter) I.
  Eigen::MatrixXd factor() const { return llt_.matrixL(); }

  PosteriorPrediction Predict(const Eigen::Ref<const Eigen::VectorXd>& x_star) const;

  /// Batched prediction for the rows of `x_star` (m x d).
  void PredictBatch(const Eigen::MatrixXd& x_star, Eigen::VectorXd& mean,
                    Eigen::VectorXd& variance) const;

  /// log p(y | X) of the (centred) targets under the fitted hyperparameters.
  double LogMarginalLikelihood() const;

 private:
  friend GpModel GpFit(Eigen::MatrixXd inputs, Eigen::VectorXd targets, const KernelConfig& cfg,
                       double noise_std, MeanPolicy mean_policy);

  double ClampVariance(double variance, double prior) const;

  KernelConfig kernel_;
  double noise_std_ = 0.0;
  double jitter_ = 0.0;
  double target_offset_ = 0.0;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;   // as given
  Eigen::VectorXd centered_;  // targets - offset
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // (K + s^2 I)^{-1} centred targets
};

/// Factorizes K + noise^2 I, escalating diagonal jitter from 1e-10 to 1e-2
/// times mean(diag K) when the plain factorization fails.
GpModel GpFit(Eigen::MatrixXd inputs, Eigen::VectorXd targets, const KernelConfig& cfg,
              double noise_std, MeanPolicy mean_policy = MeanPolicy::kSampleMean);

// ---------------------------------------------------------------------------
// Marginal-likelihood hyperparameter search.

/// Box in log space over (lengthscale, signal variance, noise std).
struct HyperSearchSpace {
  double log_lengthscale_lo = 0.0, log_lengthscale_hi = 0.0;
  double log_signal_variance_lo = 0.0, log_signal_variance_hi = 0.0;
  double log_noise_std_lo = 0.0, log_noise_std_hi = 0.0;

  void Validate() const;

  /// lengthscale in [1e-2, 1e2] x median pairwise distance, signal variance
  /// in [1e-3, 1e3] x var(y), noise std in [1e-6, 1] x std(y).
  static HyperSearchSpace FromData(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);
};

struct HyperSearchOptions {
  int grid_points = 16;
  int refinement_passes = 2;
  MeanPolicy mean_policy = MeanPolicy::kSampleMean;
};

struct HyperFit {
  KernelConfig kernel;
  double noise_std = 0.0;
  double log_marginal_likelihood = 0.0;
  int candidates_evaluated = 0;
};

HyperFit FitHyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                            const HyperSearchSpace& space, const HyperSearchOptions& options = {});

}  // namespace hdbo::gp

#endif  // HDBO_GP_HPP_
