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

#ifndef HDBO_CMAES_HPP_
#define HDBO_CMAES_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hdbo/box.hpp"

namespace hdbo::acquisition {

enum class CovarianceMode {
  kAuto,  // full up to kDiagonalThreshold dimensions, diagonal above
  kFull,
  kDiagonal,
};

inline constexpr int kDiagonalThreshold = 500;

struct CmaesConfig {
  int population = 0;  // 0 selects 4 + floor(3 ln D), capped at 64
  int max_generations = 100;
  double initial_step = 0.3;  // fraction of the box width
  CovarianceMode covariance_mode = CovarianceMode::kAuto;
  std::uint64_t seed = 0;
  /// Initial mean. The box centre is used when absent; the centre is always
  /// evaluated in generation 0 either way.
  std::optional<Eigen::VectorXd> start;
  /// Stop once the generation-best values have stayed within this band for
  /// `stall_generations` consecutive generations.
  double tol_fun = 1e-12;
  int stall_generations = 10;

  void Validate() const;
  int ResolvedPopulation(int dim) const;
  bool UsesDiagonal(int dim) const;
};

/// Evaluates every row of `points` (lambda x D). Non-finite values mark a
/// candidate as infeasible.
using BatchObjective = std::function<Eigen::VectorXd(const Eigen::MatrixXd& points)>;
using PointObjective = std::function<double(const Eigen::VectorXd& x)>;

struct MaximizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int generations = 0;
  int evaluations = 0;
  std::vector<double> best_history;  // best value after each generation
};

/// Maximizes `objective` over `bounds` with CMA-ES, clipping samples to the box.
MaximizeResult MaximizeAcquisition(const BatchObjective& objective, const Box& bounds, const CmaesConfig& cfg);
MaximizeResult MaximizeAcquisition(const PointObjective& objective, const Box& bounds, const CmaesConfig& cfg);

}  // namespace hdbo::acquisition

#endif  // HDBO_CMAES_HPP_
