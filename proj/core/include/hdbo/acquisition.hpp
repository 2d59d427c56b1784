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

#ifndef HDBO_ACQUISITION_HPP_
#define HDBO_ACQUISITION_HPP_

#include <Eigen/Core>

#include "hdbo/cmaes.hpp"
#include "hdbo/gp.hpp"

namespace hdbo::acquisition {

enum class BetaSchedule { kFixed, kLogGrowth };

struct UcbConfig {
  double beta = 4.0;
  BetaSchedule schedule = BetaSchedule::kFixed;

  void Validate() const;

  /// beta_t; the log-growth schedule is 2 log(d t^2 pi^2 / (6 * 0.1)).
  double BetaAt(int t, int d_eff = 1) const;
};

double Ucb(const gp::PosteriorPrediction& pred, const UcbConfig& cfg, int t, int d_eff = 1);

/// Elementwise mean + sqrt(beta_t) * sqrt(variance).
Eigen::VectorXd UcbBatch(const Eigen::VectorXd& mean, const Eigen::VectorXd& variance, const UcbConfig& cfg,
                         int t, int d_eff = 1);

}  // namespace hdbo::acquisition

#endif  // HDBO_ACQUISITION_HPP_
