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

#ifndef HDBO_DRIVER_HPP_
#define HDBO_DRIVER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hdbo/acquisition.hpp"
#include "hdbo/cmaes.hpp"
#include "hdbo/problems.hpp"

namespace hdbo::driver {

enum class Method { kSirBo, kKisirBo, kRandom, kFullGpUcb };

std::string_view MethodName(Method m);
Method ParseMethod(std::string_view name);

/// Full-space GP-UCB is only offered up to this many coordinates.
inline constexpr int kFullGpMaxDim = 200;

struct RunConfig {
  Method method = Method::kSirBo;
  int budget = 500;           // total objective evaluations T
  int init_n = 50;            // uniform random initial design
  int target_dim = 10;        // assumed subspace dimension d
  int sir_refresh_every = 10;
  int hyper_refresh_every = 20;
  std::uint64_t seed = 0;
  acquisition::UcbConfig ucb;
  acquisition::CmaesConfig cmaes;  // seed and start are set per iteration
  /// Lengthscale of the kernelizing input kernel, in units of the RMS
  /// per-coordinate distance on the unit box (see README).
  double input_lengthscale = 0.1;
  /// SIR-BO acquisition is confined to the bounding box of the projected
  /// training inputs, widened by this fraction of its extent on each side.
  /// Negative disables the restriction.
  double sir_feature_margin = 0.1;
  /// Start each acquisition search at the incumbent instead of the box centre.
  bool start_from_incumbent = true;
  /// Keep every queried point in the trace.
  bool record_points = true;

  void Validate() const;
};

/// Wall-clock seconds spent per stage of a run.
struct StageTimes {
  double subspace = 0.0;     // SIR / KISIR eigenproblems
  double gp = 0.0;           // hyperparameter search and GP factorization
  double acquisition = 0.0;  // CMA-ES over the acquisition
  double gram = 0.0;         // kernelizing inputs
  double objective = 0.0;
};

struct RegretTrace {
  std::vector<Eigen::VectorXd> points;  // empty unless record_points
  std::vector<double> values;           // objective values in query order
  std::vector<double> best_so_far;      // in the problem's own sense
  std::vector<double> simple_regret;    // NaN when the optimum is unknown
  std::vector<int> fallback_iterations; // random proposals after d_eff = 0
  Eigen::MatrixXd final_directions;     // SIR-BO only
  StageTimes times;
  int final_anchor_count = 0;           // KISIR-BO only

  int size() const { return static_cast<int>(values.size()); }
};

RegretTrace RunSirBo(const bench::Problem& problem, const RunConfig& cfg);
RegretTrace RunKisirBo(const bench::Problem& problem, const RunConfig& cfg);
/// Random search or full-space GP-UCB.
RegretTrace RunBaseline(const bench::Problem& problem, const RunConfig& cfg);
/// Dispatches on cfg.method.
RegretTrace Run(const bench::Problem& problem, const RunConfig& cfg);

}  // namespace hdbo::driver

#endif  // HDBO_DRIVER_HPP_
