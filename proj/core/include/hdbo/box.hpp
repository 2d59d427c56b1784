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

#ifndef HDBO_BOX_HPP_
#define HDBO_BOX_HPP_

#include <stdexcept>

#include <Eigen/Core>

namespace hdbo {

/// Axis-aligned search box.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  Eigen::VectorXd Center() const { return 0.5 * (lower + upper); }
  Eigen::VectorXd Width() const { return upper - lower; }

  bool Contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }

  void Validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) throw std::invalid_argument("Box: empty or mismatched bounds");
    if (!lower.allFinite() || !upper.allFinite()) throw std::invalid_argument("Box: bounds must be finite");
    if ((upper.array() < lower.array()).any()) throw std::invalid_argument("Box: upper bound below lower bound");
  }

  static Box Unit(int dim) { return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)}; }
};

}  // namespace hdbo

#endif  // HDBO_BOX_HPP_
