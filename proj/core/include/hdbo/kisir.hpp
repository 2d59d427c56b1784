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

#ifndef HDBO_KISIR_HPP_
#define HDBO_KISIR_HPP_

#include <Eigen/Core>

#include "hdbo/gp.hpp"

namespace hdbo::kisir {

/// Gram matrix over the anchor points together with its double-centred copy
/// K_c = H K H. Values are immutable; Append returns the extended state.
class GramState {
 public:
  GramState() = default;

  static GramState Build(Eigen::MatrixXd points, const gp::KernelConfig& cfg);

  /// Extends the anchor set by one point. The raw Gram is bit-identical to
  /// Build over the extended set.
  GramState Append(const Eigen::Ref<const Eigen::VectorXd>& x) const&;
  GramState Append(const Eigen::Ref<const Eigen::VectorXd>& x) &&;

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::MatrixXd& raw() const { return raw_; }
  const Eigen::MatrixXd& centered() const { return centered_; }
  const gp::KernelConfig& kernel() const { return kernel_; }
  const Eigen::VectorXd& row_means() const { return row_means_; }
  double grand_mean() const { return grand_mean_; }

  /// k(x) = (kappa(x, anchor_i))_i, evaluated exactly as the Gram entries are.
  Eigen::VectorXd KernelVector(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Kernel vectors for the rows of `xs` (m x D), one column per row (N x m).
  /// Uses a GEMM-based distance so it is fast but not bit-identical to KernelVector.
  Eigen::MatrixXd KernelVectors(const Eigen::MatrixXd& xs) const;

  /// Applies the training centring map to kernel vectors stored as columns.
  void CenterInPlace(Eigen::Ref<Eigen::MatrixXd> k) const;

 private:
  void Recenter();

  gp::KernelConfig kernel_;
  Eigen::MatrixXd points_;
  Eigen::MatrixXd raw_;
  Eigen::MatrixXd centered_;
  Eigen::VectorXd row_means_;
  double grand_mean_ = 0.0;
};

struct KisirOptions {
  int slice_count = 0;      // 0 selects d + 1
  double ridge = 1e-3;      // relative to trace(Sigma_K) / N
  double rank_tol = 1e-10;  // relative to the largest eigenvalue
};

/// Kernel-space SIR solution. Row k of `coefficients` maps a centred kernel
/// vector to feature k; rows are scaled so the training features have unit
/// sample variance.
struct KisirDecomposition {
  Eigen::MatrixXd coefficients;    // d_eff x N
  Eigen::VectorXd eigenvalues;     // d_eff, nonincreasing
  Eigen::MatrixXd train_features;  // N x d_eff
  int anchor_count = 0;

  int d_eff() const { return static_cast<int>(coefficients.rows()); }
};

KisirDecomposition KisirDirections(const GramState& state, const Eigen::VectorXd& targets, int d,
                                   const KisirOptions& options = {});

Eigen::VectorXd KisirProject(const KisirDecomposition& decomp, const GramState& state,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Batched projection of the rows of `xs`; returns m x d_eff.
Eigen::MatrixXd KisirProjectRows(const KisirDecomposition& decomp, const GramState& state,
                                 const Eigen::MatrixXd& xs);

}  // namespace hdbo::kisir

#endif  // HDBO_KISIR_HPP_
