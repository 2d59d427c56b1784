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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hdbo/cmaes.hpp"
#include "test_util.hpp"

namespace hdbo::acquisition {
namespace {

PointObjective NegSphere(const Eigen::VectorXd& c) {
  return [c](const Eigen::VectorXd& x) { return -(x - c).squaredNorm(); };
}

TEST(CmaesConfigTest, DefaultsAndValidation) {
  CmaesConfig cfg;
  EXPECT_EQ(cfg.ResolvedPopulation(5), 4 + static_cast<int>(std::floor(3 * std::log(5.0))));
  EXPECT_EQ(cfg.ResolvedPopulation(1 << 30), 64);
  EXPECT_FALSE(cfg.UsesDiagonal(500));
  EXPECT_TRUE(cfg.UsesDiagonal(501));
  cfg.population = 3;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.population = 0;
  cfg.initial_step = 0.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.initial_step = 1.5;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(MaximizeAcquisitionTest, FindsInteriorSphereOptimum) {
  const Eigen::VectorXd c = (Eigen::VectorXd(5) << 0.2, 0.7, 0.4, 0.9, 0.35).finished();
  CmaesConfig cfg;
  cfg.seed = 3;
  cfg.max_generations = 400;
  cfg.tol_fun = 1e-18;
  const auto r = MaximizeAcquisition(NegSphere(c), Box::Unit(5), cfg);
  EXPECT_LT((r.x - c).norm(), 1e-3);
}

TEST(MaximizeAcquisitionTest, ConstantObjective) {
  CmaesConfig cfg;
  cfg.seed = 1;
  const auto r = MaximizeAcquisition([](const Eigen::VectorXd&) { return 2.5; }, Box::Unit(4), cfg);
  EXPECT_EQ(r.value, 2.5);
  EXPECT_TRUE(Box::Unit(4).Contains(r.x));
}

TEST(MaximizeAcquisitionTest, CenterIsAlwaysConsidered) {
  // A needle at the box centre: the returned value can never be worse.
  const Box box{Eigen::VectorXd::Constant(6, -2.0), Eigen::VectorXd::Constant(6, 4.0)};
  const Eigen::VectorXd center = box.Center();
  auto f = [&](const Eigen::VectorXd& x) { return (x - center).norm() < 1e-9 ? 10.0 : -(x - center).norm(); };
  CmaesConfig cfg;
  cfg.seed = 5;
  cfg.start = Eigen::VectorXd::Constant(6, 3.5);
  EXPECT_GE(MaximizeAcquisition(f, box, cfg).value, 10.0 - 1e-12);
}

TEST(MaximizeAcquisitionTest, DiagonalModeAtHighDimension) {
  const int dim = 2000;
  std::mt19937_64 rng(4);
  const Eigen::VectorXd c = hdbo::testing::UniformMatrix(rng, dim, 1, 0.3, 0.7).col(0);
  CmaesConfig cfg;
  cfg.seed = 2;
  cfg.max_generations = 200;
  cfg.covariance_mode = CovarianceMode::kDiagonal;
  // The default population cannot close this gap in 200 generations at D = 2000,
  // so this check uses the largest population and a step matched to the optimum's range.
  cfg.population = 64;
  cfg.initial_step = 0.05;
  BatchObjective f = [&](const Eigen::MatrixXd& pts) {
    return Eigen::VectorXd(-(pts.rowwise() - c.transpose()).rowwise().squaredNorm());
  };
  const auto r = MaximizeAcquisition(f, Box::Unit(dim), cfg);
  EXPECT_LE(r.generations, 200);
  EXPECT_LT((r.x - c).norm(), 0.05 * std::sqrt(static_cast<double>(dim)));
}

TEST(MaximizeAcquisitionTest, DeterministicForSeed) {
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(8, 0.6);
  auto f = [&](const Eigen::VectorXd& x) { return -(x - c).cwiseAbs().sum() + std::sin(10 * x(0)); };
  CmaesConfig cfg;
  cfg.seed = 42;
  const auto a = MaximizeAcquisition(f, Box::Unit(8), cfg);
  const auto b = MaximizeAcquisition(f, Box::Unit(8), cfg);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_history, b.best_history);
  cfg.seed = 43;
  EXPECT_FALSE(MaximizeAcquisition(f, Box::Unit(8), cfg).best_history == a.best_history);
}

TEST(MaximizeAcquisitionTest, InBoundsAndMonotoneHistory) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial;
    const Box box{Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0)};
    // Optimum outside the box so the search presses against the bounds.
    const Eigen::VectorXd c = hdbo::testing::UniformMatrix(rng, dim, 1, 1.5, 3.0).col(0);
    CmaesConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto r = MaximizeAcquisition(NegSphere(c), box, cfg);
    EXPECT_TRUE(box.Contains(r.x));
    for (std::size_t g = 1; g < r.best_history.size(); ++g) EXPECT_GE(r.best_history[g], r.best_history[g - 1]);
    EXPECT_EQ(r.best_history.back(), r.value);
  }
}

TEST(MaximizeAcquisitionTest, ConstantShiftInvariance) {
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(4, 0.25);
  auto f = NegSphere(c);
  auto g = [&](const Eigen::VectorXd& x) { return f(x) + 1.0; };
  CmaesConfig cfg;
  cfg.seed = 9;
  cfg.tol_fun = 0.0;
  cfg.max_generations = 30;
  const auto a = MaximizeAcquisition(f, Box::Unit(4), cfg);
  const auto b = MaximizeAcquisition(g, Box::Unit(4), cfg);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_NEAR(b.value - a.value, 1.0, 1e-12);
}

TEST(MaximizeAcquisitionTest, NonFiniteValuesAreDiscarded) {
  auto f = [](const Eigen::VectorXd& x) {
    return x(0) > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x(0);
  };
  CmaesConfig cfg;
  cfg.seed = 11;
  const auto r = MaximizeAcquisition(f, Box::Unit(3), cfg);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_LE(r.x(0), 0.5);
  EXPECT_THROW(MaximizeAcquisition([](const Eigen::VectorXd&) { return std::nan(""); }, Box::Unit(3), cfg),
               std::runtime_error);
}

}  // namespace
}  // namespace hdbo::acquisition
