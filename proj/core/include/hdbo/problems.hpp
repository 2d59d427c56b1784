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

#ifndef HDBO_PROBLEMS_HPP_
#define HDBO_PROBLEMS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdbo/box.hpp"

namespace hdbo::bench {

enum class Sense { kMinimize, kMaximize };

/// A black-box test problem with optional known optimum value.
struct Problem {
  std::string name;
  int dim = 0;
  int intrinsic_dim = 0;
  Box bounds;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::optional<double> known_optimum;
  Sense sense = Sense::kMinimize;
  /// Coordinates the objective reads, when known (embedded problems).
  std::vector<int> active_indices;

  double operator()(const Eigen::VectorXd& x) const { return objective(x); }
};

/// Global minimum of the Branin function.
inline constexpr double kBraninMinimum = 0.39788735772973816;

/// Standard Branin-Hoo on [-5, 10] x [0, 15].
double Branin(const Eigen::Ref<const Eigen::VectorXd>& u);

inline constexpr std::array<double, 3> kTrimodalWeights = {0.1, 0.8, 0.1};

/// Log of a weighted mixture of three isotropic Gaussians with variance
/// 0.01 * d_e^0.1, evaluated with a max-shifted log-sum-exp.
double Trimodal(const Eigen::Ref<const Eigen::VectorXd>& u, const std::array<Eigen::VectorXd, 3>& centers,
                const std::array<double, 3>& weights = kTrimodalWeights);

/// Centres 0.2, 0.5 and 0.8 along the diagonal of the unit box.
std::array<Eigen::VectorXd, 3> DefaultTrimodalCenters(int intrinsic_dim);

Problem BraninProblem();
Problem TrimodalProblem(int intrinsic_dim = 2);

/// Embeds `base` into a D-dimensional unit box. The objective reads
/// `base.dim` randomly chosen coordinates (or `indices` when given), rescaled
/// affinely onto the base bounds; every other coordinate is ignored.
Problem Embed(const Problem& base, int dim, std::uint64_t seed,
              const std::optional<std::vector<int>>& indices = std::nullopt);

/// "branin" or "trimodal", embedded into `dim` coordinates.
Problem MakeProblem(const std::string& name, int dim, std::uint64_t seed);

}  // namespace hdbo::bench

#endif  // HDBO_PROBLEMS_HPP_
