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

#include "hdbo/kisir.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hdbo/sdr.hpp"

namespace hdbo::kisir {

namespace {

constexpr double kSignalFloor = 1e-12;

void CheckAnchors(const KisirDecomposition& decomp, const GramState& state) {
  if (decomp.anchor_count != state.size()) {
    std::ostringstream os;
    os << "KisirProject: decomposition has " << decomp.anchor_count << " anchors, Gram state has "
       << state.size();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

GramState GramState::Build(Eigen::MatrixXd points, const gp::KernelConfig& cfg) {
  cfg.Validate();
  if (points.rows() < 1) throw std::invalid_argument("GramState::Build: need at least one point");
  GramState s;
  s.kernel_ = cfg;
  s.points_ = std::move(points);
  s.raw_ = gp::GramMatrix(cfg, s.points_);
  s.Recenter();
  return s;
}

GramState GramState::Append(const Eigen::Ref<const Eigen::VectorXd>& x) const& {
  GramState copy = *this;
  return std::move(copy).Append(x);
}

GramState GramState::Append(const Eigen::Ref<const Eigen::VectorXd>& x) && {
  if (x.size() != points_.cols()) {
    std::ostringstream os;
    os << "GramState::Append: point has " << x.size() << " coordinates, anchors have " << points_.cols();
    throw std::invalid_argument(os.str());
  }
  const Eigen::Index n = points_.rows();
  points_.conservativeResize(n + 1, Eigen::NoChange);
  points_.row(n) = x.transpose();
  raw_.conservativeResize(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double value = gp::KernelEval(kernel_, points_.row(i).transpose(), x);
    raw_(i, n) = value;
    raw_(n, i) = value;
  }
  raw_(n, n) = gp::KernelEval(kernel_, x, x);
  Recenter();
  return std::move(*this);
}

void GramState::Recenter() {
  row_means_ = raw_.rowwise().mean();
  grand_mean_ = row_means_.mean();
  centered_ = raw_;
  centered_.colwise() -= row_means_;
  centered_.rowwise() -= row_means_.transpose();
  centered_.array() += grand_mean_;
}

Eigen::VectorXd GramState::KernelVector(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != points_.cols()) throw std::invalid_argument("GramState::KernelVector: dimension mismatch");
  Eigen::VectorXd k(points_.rows());
  for (Eigen::Index i = 0; i < points_.rows(); ++i) k(i) = gp::KernelEval(kernel_, points_.row(i).transpose(), x);
  return k;
}

Eigen::MatrixXd GramState::KernelVectors(const Eigen::MatrixXd& xs) const {
  return gp::KernelMatrix(kernel_, points_, xs);
}

void GramState::CenterInPlace(Eigen::Ref<Eigen::MatrixXd> k) const {
  // k_c = k - K 1/N - (1^T k / N) 1 + (1^T K 1 / N^2) 1
  const Eigen::RowVectorXd col_means = k.colwise().mean();
  k.colwise() -= row_means_;
  k.rowwise() -= col_means;
  k.array() += grand_mean_;
}

KisirDecomposition KisirDirections(const GramState& state, const Eigen::VectorXd& targets, int d,
                                   const KisirOptions& options) {
  const int n = state.size();
  if (d < 1) throw std::invalid_argument("KisirDirections: d must be >= 1");
  if (targets.size() != n) throw std::invalid_argument("KisirDirections: targets do not match the anchors");
  if (n < d + 1) throw std::invalid_argument("KisirDirections: need at least d + 1 anchors");
  const int slice_count = options.slice_count > 0 ? options.slice_count : d + 1;

  KisirDecomposition out;
  out.anchor_count = n;
  out.coefficients.resize(0, n);
  out.train_features.resize(n, 0);
  if (targets.maxCoeff() == targets.minCoeff()) return out;

  const Eigen::MatrixXd& kc = state.centered();
  const sdr::SliceAssignment slices = sdr::PartitionSlices(targets, slice_count);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, slice_count);
  for (int i = 0; i < n; ++i) w.col(slices.slice_of[static_cast<std::size_t>(i)]) += kc.col(i);
  for (int j = 0; j < slice_count; ++j) {
    const double nj = slices.slice_sizes[static_cast<std::size_t>(j)];
    w.col(j) *= std::sqrt(nj / n) / nj;
  }

  Eigen::MatrixXd sigma = kc * kc.transpose() / static_cast<double>(n);
  const double trace = sigma.trace();
  if (!(trace > 0.0)) return out;
  sigma.diagonal().array() += options.ridge * trace / n;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::runtime_error("KisirDirections: covariance factorization failed");
  const Eigen::MatrixXd sinv_w = llt.solve(w);

  Eigen::MatrixXd small = w.transpose() * sinv_w;
  small = 0.5 * (small + small.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double largest = values(values.size() - 1);
  if (!(largest > kSignalFloor)) return out;

  const int max_keep = std::min(d, slice_count - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = values.size() - 1; k >= 0 && static_cast<int>(keep.size()) < max_keep; --k) {
    if (values(k) > options.rank_tol * largest) keep.push_back(k);
  }

  const Eigen::VectorXd centered_targets = targets.array() - targets.mean();
  const auto rows = static_cast<Eigen::Index>(keep.size());
  out.coefficients.resize(rows, n);
  out.eigenvalues.resize(rows);
  out.train_features.resize(n, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index k = keep[static_cast<std::size_t>(r)];
    Eigen::VectorXd coef = sinv_w * eig.eigenvectors().col(k) / std::sqrt(values(k));
    Eigen::VectorXd feature = kc * coef;  // K_c symmetric: u_i = coef . K_c(:, i)
    const double sd = std::sqrt(feature.squaredNorm() / std::max(1, n - 1));
    if (sd > 0.0) {
      coef /= sd;
      feature /= sd;
    }
    if (feature.dot(centered_targets) < 0.0) {
      coef = -coef;
      feature = -feature;
    }
    out.coefficients.row(r) = coef.transpose();
    out.train_features.col(r) = feature;
    out.eigenvalues(r) = values(k);
  }
  return out;
}

Eigen::VectorXd KisirProject(const KisirDecomposition& decomp, const GramState& state,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
  CheckAnchors(decomp, state);
  Eigen::MatrixXd k = state.KernelVector(x);
  state.CenterInPlace(k);
  return decomp.coefficients * k.col(0);
}

Eigen::MatrixXd KisirProjectRows(const KisirDecomposition& decomp, const GramState& state,
                                 const Eigen::MatrixXd& xs) {
  CheckAnchors(decomp, state);
  if (xs.cols() != state.dim()) throw std::invalid_argument("KisirProjectRows: dimension mismatch");
  Eigen::MatrixXd k = state.KernelVectors(xs);
  state.CenterInPlace(k);
  return (decomp.coefficients * k).transpose();
}

}  // namespace hdbo::kisir
