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

#include "hdbo/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hdbo::acquisition {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Strategy parameters after Hansen's tutorial defaults; the diagonal variant
// uses the sep-CMA learning-rate boost.
struct Strategy {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  Eigen::VectorXd weights;
  double mueff = 0.0;
  double cs = 0.0, ds = 0.0, cc = 0.0, c1 = 0.0, cmu = 0.0;
  double chi_n = 0.0;
  int eigen_interval = 1;

  Strategy(int dim, int pop, bool diagonal) : n(dim), lambda(pop), mu(pop / 2) {
    weights.resize(mu);
    for (int i = 0; i < mu; ++i) weights(i) = std::log(mu + 0.5) - std::log(i + 1.0);
    weights /= weights.sum();
    mueff = 1.0 / weights.squaredNorm();
    const double nn = n;
    cs = (mueff + 2.0) / (nn + mueff + 5.0);
    ds = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nn + 1.0)) - 1.0) + cs;
    cc = (4.0 + mueff / nn) / (nn + 4.0 + 2.0 * mueff / nn);
    c1 = 2.0 / ((nn + 1.3) * (nn + 1.3) + mueff);
    cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nn + 2.0) * (nn + 2.0) + mueff));
    if (diagonal) {
      const double boost = (nn + 2.0) / 3.0;
      c1 = std::min(1.0, c1 * boost);
      cmu = std::min(1.0 - c1, cmu * boost);
    }
    chi_n = std::sqrt(nn) * (1.0 - 1.0 / (4.0 * nn) + 1.0 / (21.0 * nn * nn));
    eigen_interval = std::max(1, static_cast<int>(std::floor(1.0 / ((c1 + cmu) * nn * 10.0))));
  }
};

}  // namespace

void CmaesConfig::Validate() const {
  if (population != 0 && population < 4) throw std::invalid_argument("CmaesConfig: population must be >= 4");
  if (max_generations < 1) throw std::invalid_argument("CmaesConfig: max_generations must be >= 1");
  if (!(initial_step > 0.0 && initial_step <= 1.0)) {
    throw std::invalid_argument("CmaesConfig: initial_step must lie in (0, 1]");
  }
}

int CmaesConfig::ResolvedPopulation(int dim) const {
  if (population > 0) return population;
  const int pop = 4 + static_cast<int>(std::floor(3.0 * std::log(std::max(1, dim))));
  return std::clamp(pop, 4, 64);
}

bool CmaesConfig::UsesDiagonal(int dim) const {
  switch (covariance_mode) {
    case CovarianceMode::kFull:
      return false;
    case CovarianceMode::kDiagonal:
      return true;
    case CovarianceMode::kAuto:
      break;
  }
  return dim > kDiagonalThreshold;
}

MaximizeResult MaximizeAcquisition(const BatchObjective& objective, const Box& bounds, const CmaesConfig& cfg) {
  bounds.Validate();
  cfg.Validate();
  const int n = bounds.dim();
  const bool diagonal = cfg.UsesDiagonal(n);
  const Strategy s(n, cfg.ResolvedPopulation(n), diagonal);

  // Search in the unit cube; x = lower + z * width.
  const Eigen::VectorXd width = bounds.Width();
  auto to_box = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return bounds.lower.array() + z.array() * width.array();
  };
  auto to_unit = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = width(i) > 0.0 ? (x(i) - bounds.lower(i)) / width(i) : 0.5;
    return z.cwiseMax(0.0).cwiseMin(1.0);
  };

  Eigen::VectorXd mean = Eigen::VectorXd::Constant(n, 0.5);
  bool inject_start = false;
  if (cfg.start) {
    if (cfg.start->size() != n) throw std::invalid_argument("MaximizeAcquisition: start point has the wrong dimension");
    mean = to_unit(*cfg.start);
    inject_start = true;
  }
  double sigma = cfg.initial_step;

  Eigen::VectorXd diag_c = Eigen::VectorXd::Ones(n);  // diagonal mode: C = diag(diag_c)
  Eigen::MatrixXd c, b;                                // full mode: C = B diag(D^2) B^T
  if (!diagonal) {
    c = Eigen::MatrixXd::Identity(n, n);
    b = Eigen::MatrixXd::Identity(n, n);
  }
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);
  int last_eigen = 0;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  MaximizeResult result;
  result.value = kNegInf;
  Eigen::MatrixXd z(s.lambda, n);  // candidate points (unit cube), one per row
  Eigen::MatrixXd y(n, s.lambda);  // steps (z - mean) / sigma
  // The last row carries the current mean, which in high dimension usually
  // beats every sample; it is scored but takes no part in the update.
  Eigen::MatrixXd points(s.lambda + 1, n);
  std::vector<int> rank(static_cast<std::size_t>(s.lambda));
  std::vector<double> generation_best;

  for (int gen = 0; gen < cfg.max_generations; ++gen) {
    for (int k = 0; k < s.lambda; ++k) {
      Eigen::VectorXd g(n);
      for (int i = 0; i < n; ++i) g(i) = normal(rng);
      Eigen::VectorXd step = diagonal ? Eigen::VectorXd(d.cwiseProduct(g)) : Eigen::VectorXd(b * d.cwiseProduct(g));
      Eigen::VectorXd cand = (mean + sigma * step).cwiseMax(0.0).cwiseMin(1.0);
      if (gen == 0 && k == 0) cand = Eigen::VectorXd::Constant(n, 0.5);
      if (gen == 0 && k == 1 && inject_start) cand = mean;
      z.row(k) = cand.transpose();
      y.col(k) = (cand - mean) / sigma;
      points.row(k) = to_box(cand).transpose();
    }
    points.row(s.lambda) = to_box(mean).transpose();

    Eigen::VectorXd values = objective(points);
    if (values.size() != s.lambda + 1) throw std::runtime_error("MaximizeAcquisition: objective returned the wrong count");
    for (int k = 0; k <= s.lambda; ++k) {
      if (!std::isfinite(values(k))) values(k) = kNegInf;
    }
    result.evaluations += s.lambda + 1;
    ++result.generations;

    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](int a, int b2) { return values(a) > values(b2); });
    const int top = rank[0];
    const int favourite = values(s.lambda) > values(top) ? s.lambda : top;
    if (values(favourite) > result.value) {
      result.value = values(favourite);
      result.x = points.row(favourite).transpose();
    }
    result.best_history.push_back(result.value);
    generation_best.push_back(values(top));

    if (values(top) == kNegInf) continue;

    // Stall: recent generation bests and the current spread all within tol.
    if (static_cast<int>(generation_best.size()) >= cfg.stall_generations) {
      const auto first = generation_best.end() - cfg.stall_generations;
      const auto [lo, hi] = std::minmax_element(first, generation_best.end());
      const double worst_now = values(rank[static_cast<std::size_t>(s.lambda - 1)]);
      const double tol = cfg.tol_fun * (1.0 + std::abs(result.value));
      if (*hi - *lo <= tol && std::isfinite(worst_now) && values(top) - worst_now <= tol) break;
    }

    // Recombination.
    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd y_sel(n, s.mu);
    for (int i = 0; i < s.mu; ++i) {
      y_sel.col(i) = y.col(rank[static_cast<std::size_t>(i)]);
      y_w += s.weights(i) * y_sel.col(i);
    }
    mean = (mean + sigma * y_w).cwiseMax(0.0).cwiseMin(1.0);

    // Step-size path uses C^{-1/2} y_w.
    Eigen::VectorXd inv_sqrt_y =
        diagonal ? Eigen::VectorXd(y_w.cwiseQuotient(d)) : Eigen::VectorXd(b * (b.transpose() * y_w).cwiseQuotient(d));
    ps = (1.0 - s.cs) * ps + std::sqrt(s.cs * (2.0 - s.cs) * s.mueff) * inv_sqrt_y;
    const double ps_norm = ps.norm();
    const double denom = std::sqrt(1.0 - std::pow(1.0 - s.cs, 2.0 * (gen + 1)));
    const bool hsig = ps_norm / denom < (1.4 + 2.0 / (n + 1.0)) * s.chi_n;
    pc = (1.0 - s.cc) * pc + (hsig ? std::sqrt(s.cc * (2.0 - s.cc) * s.mueff) : 0.0) * y_w;

    const double old_weight = 1.0 - s.c1 - s.cmu + (hsig ? 0.0 : s.c1 * s.cc * (2.0 - s.cc));
    if (diagonal) {
      Eigen::VectorXd rank_mu = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < s.mu; ++i) rank_mu += s.weights(i) * y_sel.col(i).cwiseAbs2();
      diag_c = old_weight * diag_c + s.c1 * pc.cwiseAbs2() + s.cmu * rank_mu;
      d = diag_c.cwiseMax(1e-300).cwiseSqrt();
    } else {
      const Eigen::MatrixXd weighted = y_sel * s.weights.asDiagonal();
      c = old_weight * c + s.c1 * pc * pc.transpose() + s.cmu * weighted * y_sel.transpose();
      if (gen + 1 - last_eigen >= s.eigen_interval) {
        last_eigen = gen + 1;
        c = 0.5 * (c + c.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
        b = eig.eigenvectors();
        d = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
      }
    }

    sigma *= std::exp((s.cs / s.ds) * (ps_norm / s.chi_n - 1.0));
    sigma = std::min(sigma, 1.0);
    if (sigma * d.maxCoeff() < 1e-14) break;
  }

  if (result.value == kNegInf) {
    throw std::runtime_error("MaximizeAcquisition: every candidate evaluated to a non-finite value");
  }
  return result;
}

MaximizeResult MaximizeAcquisition(const PointObjective& objective, const Box& bounds, const CmaesConfig& cfg) {
  BatchObjective batch = [&](const Eigen::MatrixXd& points) {
    Eigen::VectorXd values(points.rows());
    for (Eigen::Index k = 0; k < points.rows(); ++k) values(k) = objective(points.row(k).transpose());
    return values;
  };
  return MaximizeAcquisition(batch, bounds, cfg);
}

}  // namespace hdbo::acquisition
