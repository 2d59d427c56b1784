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

#ifndef HDBO_SDR_HPP_
#define HDBO_SDR_HPP_

#include <vector>

#include <Eigen/Core>

namespace hdbo::sdr {

/// Observations grouped into J contiguous blocks of the response order.
struct SliceAssignment {
  int slice_count = 0;
  std::vector<int> slice_of;     // observation index -> slice id
  std::vector<int> slice_sizes;  // n_j
  std::vector<int> order;        // observation indices sorted by response
};

/// Sorts by target (ties broken by index) and cuts floor(n/J)-sized blocks,
/// the first n mod J blocks taking one extra observation.
SliceAssignment PartitionSlices(const Eigen::VectorXd& targets, int slice_count);

/// Column j is sqrt(n_j / n) times the mean of the centred inputs in slice j,
/// so W W^T is the between-slice covariance.
struct SliceFactor {
  Eigen::MatrixXd w;           // D x J
  Eigen::VectorXd input_mean;  // D
};

SliceFactor ComputeSliceFactor(const Eigen::MatrixXd& inputs, const SliceAssignment& assign);

struct SirOptions {
  int slice_count = 0;      // 0 selects d + 1
  double ridge = 1e-4;      // relative to trace(Sigma) / D
  double rank_tol = 1e-10;  // relative to the largest eigenvalue
};

/// Sample moments SIR works with: the ridge-regularized input covariance and
/// the slice factor.
struct SirMoments {
  Eigen::MatrixXd sigma;  // D x D, regularized
  SliceFactor factor;
  SliceAssignment slices;
};

SirMoments ComputeSirMoments(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                             int slice_count, double ridge);

/// Learned e.d.r. directions, one unit-norm row per direction, ordered by
/// decreasing eigenvalue.
struct SirDecomposition {
  Eigen::MatrixXd directions;  // d_eff x D
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd input_mean;

  int d_eff() const { return static_cast<int>(directions.rows()); }
  int dim() const { return static_cast<int>(input_mean.size()); }
};

/// Reduced-SVD solver: eigendecomposes the J x J matrix W^T Sigma^{-1} W and
/// maps back through Sigma^{-1} W U M^{-1/2}. Returns an empty decomposition
/// when the targets carry no signal.
SirDecomposition SirDirections(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, int d,
                               const SirOptions& options = {});

/// Dense generalized symmetric eigensolver for gamma b = lambda sigma b (top d
/// pairs). Used as an oracle for SirDirections.
SirDecomposition DenseGeneralizedEig(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& sigma, int d);

Eigen::VectorXd Project(const SirDecomposition& decomp, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Projects every row of `x` (m x D); returns m x d_eff.
Eigen::MatrixXd ProjectRows(const SirDecomposition& decomp, const Eigen::MatrixXd& x);

/// Frobenius distance between the orthogonal projectors onto the row spaces of a and b.
double ProjectorDistance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace hdbo::sdr

#endif  // HDBO_SDR_HPP_
