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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hdbo/gp.hpp"

namespace hdbo::gp {

namespace {

double MedianPairwiseDistance(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((x.row(i) - x.row(j)).norm());
  }
  if (d.empty()) return 1.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid > 0.0 ? *mid : 1.0;
}

std::vector<double> Linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

struct Axis {
  double lo, hi;
  double Step(int count) const { return count > 1 ? (hi - lo) / (count - 1) : 0.0; }
};

// Spectral form of the marginal likelihood for one lengthscale: with the
// unit-variance Gram R = Q diag(lambda) Q^T, every (signal, noise) pair costs O(n).
class SpectralLikelihood {
 public:
  SpectralLikelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& centered, double lengthscale) {
    const Eigen::MatrixXd r = GramMatrix(KernelConfig::SquaredExponential(lengthscale, 1.0), inputs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
    lambda_ = eig.eigenvalues().cwiseMax(0.0);
    proj2_ = (eig.eigenvectors().transpose() * centered).array().square();
  }

  double operator()(double signal_variance, double noise_std) const {
    const Eigen::ArrayXd s = signal_variance * lambda_.array() + noise_std * noise_std;
    const double n = static_cast<double>(lambda_.size());
    return -0.5 * s.log().sum() - 0.5 * (proj2_.array() / s).sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
  }

 private:
  Eigen::VectorXd lambda_;
  Eigen::VectorXd proj2_;
};

}  // namespace

void HyperSearchSpace::Validate() const {
  const double v[] = {log_lengthscale_lo, log_lengthscale_hi, log_signal_variance_lo,
                      log_signal_variance_hi, log_noise_std_lo, log_noise_std_hi};
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("HyperSearchSpace: bounds must be finite");
  }
  if (log_lengthscale_lo > log_lengthscale_hi || log_signal_variance_lo > log_signal_variance_hi ||
      log_noise_std_lo > log_noise_std_hi) {
    throw std::invalid_argument("HyperSearchSpace: empty box");
  }
}

HyperSearchSpace HyperSearchSpace::FromData(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  const double median = MedianPairwiseDistance(inputs);
  double var = 0.0;
  if (targets.size() > 1) {
    var = (targets.array() - targets.mean()).square().sum() / static_cast<double>(targets.size() - 1);
  }
  if (!(var > 0.0)) var = 1.0;
  const double sd = std::sqrt(var);
  HyperSearchSpace s;
  s.log_lengthscale_lo = std::log(1e-2 * median);
  s.log_lengthscale_hi = std::log(1e2 * median);
  s.log_signal_variance_lo = std::log(1e-3 * var);
  s.log_signal_variance_hi = std::log(1e3 * var);
  s.log_noise_std_lo = std::log(1e-6 * sd);
  s.log_noise_std_hi = std::log(sd);
  return s;
}

HyperFit FitHyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                            const HyperSearchSpace& space, const HyperSearchOptions& options) {
  space.Validate();
  if (inputs.rows() < 1 || inputs.rows() != targets.size()) {
    throw std::invalid_argument("FitHyperparameters: need matching, nonempty inputs and targets");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("FitHyperparameters: non-finite data");
  }
  const int g = std::max(1, options.grid_points);
  const double offset = options.mean_policy == MeanPolicy::kSampleMean ? targets.mean() : 0.0;
  const Eigen::VectorXd centered = targets.array() - offset;

  Axis ls{space.log_lengthscale_lo, space.log_lengthscale_hi};
  Axis sf{space.log_signal_variance_lo, space.log_signal_variance_hi};
  Axis sn{space.log_noise_std_lo, space.log_noise_std_hi};

  // Top candidates by spectral likelihood; the winner is re-checked with a
  // Cholesky fit because near-singular Grams make the spectral value unreliable.
  struct Candidate {
    double value, ls, sf, sn;
  };
  constexpr std::size_t kVerified = 8;
  std::vector<Candidate> top;
  auto offer = [&](const Candidate& c) {
    if (top.size() == kVerified && c.value <= top.back().value) return;
    const auto at = std::upper_bound(top.begin(), top.end(), c,
                                     [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    top.insert(at, c);
    if (top.size() > kVerified) top.pop_back();
  };
  int evaluated = 0;

  for (int pass = 0; pass <= options.refinement_passes; ++pass) {
    if (pass > 0 && !top.empty()) {
      // Shrink every axis to one former grid step either side of the incumbent.
      auto shrink = [&](const Axis& a, double center, const Axis& bounds) {
        const double step = a.Step(g);
        return Axis{std::max(bounds.lo, center - step), std::min(bounds.hi, center + step)};
      };
      const Candidate best = top.front();
      ls = shrink(ls, best.ls, {space.log_lengthscale_lo, space.log_lengthscale_hi});
      sf = shrink(sf, best.sf, {space.log_signal_variance_lo, space.log_signal_variance_hi});
      sn = shrink(sn, best.sn, {space.log_noise_std_lo, space.log_noise_std_hi});
    }
    const auto ls_grid = Linspace(ls.lo, ls.hi, g);
    const auto sf_grid = Linspace(sf.lo, sf.hi, g);
    const auto sn_grid = Linspace(sn.lo, sn.hi, g);
    for (double lls : ls_grid) {
      const SpectralLikelihood lml(inputs, centered, std::exp(lls));
      for (double lsf : sf_grid) {
        for (double lsn : sn_grid) {
          const double value = lml(std::exp(lsf), std::exp(lsn));
          ++evaluated;
          if (std::isfinite(value)) offer({value, lls, lsf, lsn});
        }
      }
    }
  }

  HyperFit fit;
  fit.log_marginal_likelihood = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : top) {
    const KernelConfig cfg = KernelConfig::SquaredExponential(std::exp(c.ls), std::exp(c.sf));
    double value;
    try {
      value = GpFit(inputs, targets, cfg, std::exp(c.sn), options.mean_policy).LogMarginalLikelihood();
    } catch (const FactorizationError&) {
      continue;
    }
    if (std::isfinite(value) && value > fit.log_marginal_likelihood) {
      fit.kernel = cfg;
      fit.noise_std = std::exp(c.sn);
      fit.log_marginal_likelihood = value;
    }
  }
  if (!std::isfinite(fit.log_marginal_likelihood)) {
    throw std::runtime_error("FitHyperparameters: every candidate failed");
  }
  fit.candidates_evaluated = evaluated;
  return fit;
}

}  // namespace hdbo::gp
