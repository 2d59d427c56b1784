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

#include "hdbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hdbo::acquisition {

void UcbConfig::Validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("UcbConfig: beta must be finite and >= 0");
}

double UcbConfig::BetaAt(int t, int d_eff) const {
  if (schedule == BetaSchedule::kFixed) return beta;
  const double tt = std::max(1, t);
  const double d = std::max(1, d_eff);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::max(0.0, 2.0 * std::log(d * tt * tt * pi2 / (6.0 * 0.1)));
}

double Ucb(const gp::PosteriorPrediction& pred, const UcbConfig& cfg, int t, int d_eff) {
  if (!(pred.variance >= 0.0)) throw std::invalid_argument("Ucb: negative variance");
  return pred.mean + std::sqrt(cfg.BetaAt(t, d_eff)) * std::sqrt(pred.variance);
}

Eigen::VectorXd UcbBatch(const Eigen::VectorXd& mean, const Eigen::VectorXd& variance, const UcbConfig& cfg,
                         int t, int d_eff) {
  if (mean.size() != variance.size()) throw std::invalid_argument("UcbBatch: size mismatch");
  const double root_beta = std::sqrt(cfg.BetaAt(t, d_eff));
  return mean.array() + root_beta * variance.array().max(0.0).sqrt();
}

}  // namespace hdbo::acquisition
