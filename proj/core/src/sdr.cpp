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

#include "hdbo/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace hdbo::sdr {

namespace {

// Lowest eigenvalue kept when the largest is already negligible.
constexpr double kSignalFloor = 1e-12;

void CanonicalSign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

Eigen::MatrixXd OrthonormalRowBasis(const Eigen::MatrixXd& rows) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows.cols(), rows.rows());
}

// Sigma_reg^{-1} W. For n < D the Woodbury identity keeps the cost at
// O(n^2 D) instead of factorizing the D x D covariance.
Eigen::MatrixXd SolveRegularizedCovariance(const Eigen::MatrixXd& centered, double ridge_abs,
                                           const Eigen::MatrixXd& w) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index dim = centered.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (n < dim) {
    // (c I + X^T X / n)^{-1} = (1/c) [I - X^T (n c I + X X^T)^{-1} X]
    Eigen::MatrixXd small = centered * centered.transpose();
    small.diagonal().array() += static_cast<double>(n) * ridge_abs;
    Eigen::LLT<Eigen::MatrixXd> llt(small);
    if (llt.info() != Eigen::Success) throw std::runtime_error("SirDirections: Woodbury factorization failed");
    const Eigen::MatrixXd xw = centered * w;
    return (w - centered.transpose() * llt.solve(xw)) / ridge_abs;
  }
  Eigen::MatrixXd sigma = centered.transpose() * centered * inv_n;
  sigma.diagonal().array() += ridge_abs;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::runtime_error("SirDirections: covariance factorization failed");
  return llt.solve(w);
}

}  // namespace

SliceAssignment PartitionSlices(const Eigen::VectorXd& targets, int slice_count) {
  const int n = static_cast<int>(targets.size());
  if (slice_count < 1) throw std::invalid_argument("PartitionSlices: slice count must be >= 1");
  if (slice_count > n) {
    std::ostringstream os;
    os << "PartitionSlices: " << slice_count << " slices requested for " << n << " observations";
    throw std::invalid_argument(os.str());
  }
  SliceAssignment out;
  out.slice_count = slice_count;
  out.order.resize(static_cast<std::size_t>(n));
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) { return targets(a) < targets(b); });

  out.slice_of.assign(static_cast<std::size_t>(n), 0);
  out.slice_sizes.assign(static_cast<std::size_t>(slice_count), n / slice_count);
  for (int j = 0; j < n % slice_count; ++j) ++out.slice_sizes[static_cast<std::size_t>(j)];
  int pos = 0;
  for (int j = 0; j < slice_count; ++j) {
    for (int k = 0; k < out.slice_sizes[static_cast<std::size_t>(j)]; ++k) {
      out.slice_of[static_cast<std::size_t>(out.order[static_cast<std::size_t>(pos++)])] = j;
    }
  }
  return out;
}

SliceFactor ComputeSliceFactor(const Eigen::MatrixXd& inputs, const SliceAssignment& assign) {
  const Eigen::Index n = inputs.rows();
  if (static_cast<Eigen::Index>(assign.slice_of.size()) != n) {
    throw std::invalid_argument("ComputeSliceFactor: assignment does not match the inputs");
  }
  SliceFactor out;
  out.input_mean = inputs.colwise().mean().transpose();
  out.w = Eigen::MatrixXd::Zero(inputs.cols(), assign.slice_count);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.w.col(assign.slice_of[static_cast<std::size_t>(i)]) += inputs.row(i).transpose() - out.input_mean;
  }
  for (int j = 0; j < assign.slice_count; ++j) {
    const int nj = assign.slice_sizes[static_cast<std::size_t>(j)];
    if (nj < 1) throw std::invalid_argument("ComputeSliceFactor: empty slice");
    out.w.col(j) *= std::sqrt(static_cast<double>(nj) / static_cast<double>(n)) / static_cast<double>(nj);
  }
  return out;
}

SirMoments ComputeSirMoments(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                             int slice_count, double ridge) {
  SirMoments m;
  m.slices = PartitionSlices(targets, slice_count);
  m.factor = ComputeSliceFactor(inputs, m.slices);
  const Eigen::MatrixXd centered = inputs.rowwise() - m.factor.input_mean.transpose();
  m.sigma = centered.transpose() * centered / static_cast<double>(inputs.rows());
  const double trace = m.sigma.trace();
  m.sigma.diagonal().array() += ridge * trace / static_cast<double>(inputs.cols());
  return m;
}

SirDecomposition SirDirections(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, int d,
                               const SirOptions& options) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index dim = inputs.cols();
  if (d < 1) throw std::invalid_argument("SirDirections: d must be >= 1");
  if (targets.size() != n) throw std::invalid_argument("SirDirections: targets do not match inputs");
  if (n < d + 1) throw std::invalid_argument("SirDirections: need at least d + 1 observations");
  const int slice_count = options.slice_count > 0 ? options.slice_count : d + 1;

  SirDecomposition out;
  out.input_mean = inputs.colwise().mean().transpose();
  out.directions.resize(0, dim);
  if (targets.maxCoeff() == targets.minCoeff()) return out;

  const SliceAssignment slices = PartitionSlices(targets, slice_count);
  const SliceFactor factor = ComputeSliceFactor(inputs, slices);
  const Eigen::MatrixXd centered = inputs.rowwise() - out.input_mean.transpose();
  const double trace = centered.squaredNorm() / static_cast<double>(n);
  if (!(trace > 0.0)) return out;
  const double ridge_abs = options.ridge * trace / static_cast<double>(dim);

  const Eigen::MatrixXd sinv_w = SolveRegularizedCovariance(centered, ridge_abs, factor.w);
  Eigen::MatrixXd small = factor.w.transpose() * sinv_w;
  small = 0.5 * (small + small.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const Eigen::Index j = values.size();
  const double largest = values(j - 1);
  if (!(largest > kSignalFloor)) return out;

  const int max_keep = std::min<int>(d, slice_count - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = j - 1; k >= 0 && static_cast<int>(keep.size()) < max_keep; --k) {
    if (values(k) > options.rank_tol * largest) keep.push_back(k);
  }
  out.directions.resize(static_cast<Eigen::Index>(keep.size()), dim);
  out.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const Eigen::Index k = keep[r];
    Eigen::VectorXd v = sinv_w * eig.eigenvectors().col(k) / std::sqrt(values(k));
    v.normalize();
    CanonicalSign(v);
    out.directions.row(static_cast<Eigen::Index>(r)) = v.transpose();
    out.eigenvalues(static_cast<Eigen::Index>(r)) = values(k);
  }
  return out;
}

SirDecomposition DenseGeneralizedEig(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& sigma, int d) {
  const Eigen::Index dim = sigma.rows();
  if (sigma.cols() != dim || gamma.rows() != dim || gamma.cols() != dim) {
    throw std::invalid_argument("DenseGeneralizedEig: matrices must be square and the same size");
  }
  if (d < 1 || d > dim) throw std::invalid_argument("DenseGeneralizedEig: d out of range");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("DenseGeneralizedEig: sigma is not positive definite");
  const auto l = llt.matrixL();
  Eigen::MatrixXd c = l.solve(gamma);
  c = l.solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);

  SirDecomposition out;
  out.input_mean = Eigen::VectorXd::Zero(dim);
  out.directions.resize(d, dim);
  out.eigenvalues.resize(d);
  const auto lt = llt.matrixU();
  for (int r = 0; r < d; ++r) {
    const Eigen::Index k = dim - 1 - r;
    Eigen::VectorXd v = lt.solve(eig.eigenvectors().col(k));
    v.normalize();
    CanonicalSign(v);
    out.directions.row(r) = v.transpose();
    out.eigenvalues(r) = eig.eigenvalues()(k);
  }
  return out;
}

Eigen::VectorXd Project(const SirDecomposition& decomp, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != decomp.dim()) {
    std::ostringstream os;
    os << "Project: point has " << x.size() << " coordinates, decomposition expects " << decomp.dim();
    throw std::invalid_argument(os.str());
  }
  return decomp.directions * (x - decomp.input_mean);
}

Eigen::MatrixXd ProjectRows(const SirDecomposition& decomp, const Eigen::MatrixXd& x) {
  if (x.cols() != decomp.dim()) throw std::invalid_argument("ProjectRows: dimension mismatch");
  return (x.rowwise() - decomp.input_mean.transpose()) * decomp.directions.transpose();
}

double ProjectorDistance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("ProjectorDistance: dimension mismatch");
  const Eigen::MatrixXd qa = OrthonormalRowBasis(a);
  const Eigen::MatrixXd qb = OrthonormalRowBasis(b);
  const double cross = (qa.transpose() * qb).squaredNorm();
  const double d2 = static_cast<double>(a.rows() + b.rows()) - 2.0 * cross;
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace hdbo::sdr
