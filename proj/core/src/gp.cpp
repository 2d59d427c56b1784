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

#include "hdbo/gp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hdbo::gp {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-2;
constexpr double kNegativeVarianceTolerance = 1e-6;

std::string MismatchMessage(const char* where, Eigen::Index a, Eigen::Index b) {
  std::ostringstream os;
  os << where << ": dimension mismatch (" << a << " vs " << b << ")";
  return os.str();
}

}  // namespace

void KernelConfig::Validate() const {
  if (family == KernelFamily::kLinear) return;
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw std::invalid_argument("KernelConfig: lengthscale must be positive and finite");
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw std::invalid_argument("KernelConfig: signal_variance must be positive and finite");
  }
}

double KernelEval(const KernelConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (x.size() != v.size()) throw std::invalid_argument(MismatchMessage("KernelEval", x.size(), v.size()));
  switch (cfg.family) {
    case KernelFamily::kLinear:
      return x.dot(v);
    case KernelFamily::kSquaredExponential:
      break;
  }
  const double r2 = (x - v).squaredNorm();
  return cfg.signal_variance * std::exp(-0.5 * r2 / (cfg.lengthscale * cfg.lengthscale));
}

Eigen::MatrixXd KernelMatrix(const KernelConfig& cfg, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument(MismatchMessage("KernelMatrix", a.cols(), b.cols()));
  Eigen::MatrixXd cross = a * b.transpose();
  if (cfg.family == KernelFamily::kLinear) return cross;

  const Eigen::VectorXd an = a.rowwise().squaredNorm();
  const Eigen::VectorXd bn = b.rowwise().squaredNorm();
  const double scale = -0.5 / (cfg.lengthscale * cfg.lengthscale);
  for (Eigen::Index j = 0; j < cross.cols(); ++j) {
    for (Eigen::Index i = 0; i < cross.rows(); ++i) {
      const double r2 = std::max(0.0, an(i) + bn(j) - 2.0 * cross(i, j));
      cross(i, j) = cfg.signal_variance * std::exp(scale * r2);
    }
  }
  return cross;
}

Eigen::MatrixXd GramMatrix(const KernelConfig& cfg, const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double value = KernelEval(cfg, a.row(i).transpose(), a.row(j).transpose());
      k(i, j) = value;
      k(j, i) = value;
    }
  }
  return k;
}

GpModel GpFit(Eigen::MatrixXd inputs, Eigen::VectorXd targets, const KernelConfig& cfg,
              double noise_std, MeanPolicy mean_policy) {
  cfg.Validate();
  if (inputs.rows() < 1) throw std::invalid_argument("GpFit: need at least one observation");
  if (inputs.rows() != targets.size()) {
    throw std::invalid_argument(MismatchMessage("GpFit (rows vs targets)", inputs.rows(), targets.size()));
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("GpFit: non-finite input or target");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw std::invalid_argument("GpFit: noise_std must be finite and nonnegative");
  }

  GpModel model;
  model.kernel_ = cfg;
  model.noise_std_ = noise_std;
  model.target_offset_ = mean_policy == MeanPolicy::kSampleMean ? targets.mean() : 0.0;
  model.centered_ = targets.array() - model.target_offset_;
  model.inputs_ = std::move(inputs);
  model.targets_ = std::move(targets);

  Eigen::MatrixXd k = GramMatrix(cfg, model.inputs_);
  double diag_scale = k.diagonal().mean();
  if (!(diag_scale > 0.0)) diag_scale = 1.0;
  k.diagonal().array() += noise_std * noise_std;

  model.llt_.compute(k);
  double jitter = 0.0;
  if (model.llt_.info() != Eigen::Success) {
    jitter = kJitterStart * diag_scale;
    for (;;) {
      Eigen::MatrixXd kj = k;
      kj.diagonal().array() += jitter;
      model.llt_.compute(kj);
      if (model.llt_.info() == Eigen::Success) break;
      if (jitter >= kJitterMax * diag_scale * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "GpFit: Cholesky failed after jitter " << jitter;
        throw FactorizationError(os.str(), jitter);
      }
      jitter *= 10.0;
    }
  }
  model.jitter_ = jitter;
  model.alpha_ = model.llt_.solve(model.centered_);
  return model;
}

double GpModel::ClampVariance(double variance, double prior) const {
  if (variance >= 0.0) return variance;
  if (variance < -kNegativeVarianceTolerance * std::max(prior, 1e-12)) {
    std::ostringstream os;
    os << "GpModel: negative predictive variance " << variance << " (prior " << prior << ")";
    throw std::runtime_error(os.str());
  }
  return 0.0;
}

PosteriorPrediction GpModel::Predict(const Eigen::Ref<const Eigen::VectorXd>& x_star) const {
  if (x_star.size() != inputs_.cols()) {
    throw std::invalid_argument(MismatchMessage("GpModel::Predict", x_star.size(), inputs_.cols()));
  }
  Eigen::VectorXd k_star(inputs_.rows());
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
    k_star(i) = KernelEval(kernel_, inputs_.row(i).transpose(), x_star);
  }
  const double prior = KernelEval(kernel_, x_star, x_star);
  const Eigen::VectorXd v = llt_.matrixL().solve(k_star);
  return {target_offset_ + k_star.dot(alpha_), ClampVariance(prior - v.squaredNorm(), prior)};
}

void GpModel::PredictBatch(const Eigen::MatrixXd& x_star, Eigen::VectorXd& mean,
                           Eigen::VectorXd& variance) const {
  if (x_star.cols() != inputs_.cols()) {
    throw std::invalid_argument(MismatchMessage("GpModel::PredictBatch", x_star.cols(), inputs_.cols()));
  }
  const Eigen::MatrixXd k_star = KernelMatrix(kernel_, inputs_, x_star);  // n x m
  mean = (k_star.transpose() * alpha_).array() + target_offset_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(k_star);
  const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();
  variance.resize(x_star.rows());
  for (Eigen::Index i = 0; i < x_star.rows(); ++i) {
    const double prior = kernel_.family == KernelFamily::kLinear ? x_star.row(i).squaredNorm()
                                                                  : kernel_.signal_variance;
    variance(i) = ClampVariance(prior - explained(i), prior);
  }
}

double GpModel::LogMarginalLikelihood() const {
  const Eigen::Index n = centered_.size();
  const double log_det = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
  return -0.5 * log_det - 0.5 * centered_.dot(alpha_) -
         0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

}  // namespace hdbo::gp
