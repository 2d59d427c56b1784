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
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hdbo/kisir.hpp"
#include "hdbo/sdr.hpp"
#include "test_util.hpp"

namespace hdbo::kisir {
namespace {

using gp::KernelConfig;
using hdbo::testing::Correlation;
using hdbo::testing::NormalMatrix;
using hdbo::testing::RandomUnitVector;
using hdbo::testing::UniformMatrix;

Eigen::VectorXd Ranks(const Eigen::VectorXd& v) {
  std::vector<int> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v(a) < v(b); });
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r(idx[i]) = static_cast<double>(i);
  return r;
}

TEST(GramStateTest, SinglePoint) {
  const auto s = GramState::Build(Eigen::MatrixXd::Constant(1, 3, 0.5), KernelConfig::SquaredExponential(0.1, 2.0));
  EXPECT_EQ(s.raw()(0, 0), 2.0);
  EXPECT_EQ(s.centered()(0, 0), 0.0);
}

TEST(GramStateTest, LinearKernelOnCenteredData) {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd x = NormalMatrix(rng, 25, 4);
  x.rowwise() -= x.colwise().mean();
  const auto s = GramState::Build(x, KernelConfig::Linear());
  EXPECT_LT((s.centered() - s.raw()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GramStateTest, CenteredRowsAndColumnsSumToZero) {
  std::mt19937_64 rng(2);
  const auto s = GramState::Build(UniformMatrix(rng, 30, 5), KernelConfig::SquaredExponential(0.3));
  EXPECT_LT(s.centered().rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(s.centered().colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ((s.raw() - s.raw().transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GramStateTest, AppendMatchesBuildBitForBit) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd pts = UniformMatrix(rng, 50, 7);
  const auto cfg = KernelConfig::SquaredExponential(0.4, 1.5);
  GramState s = GramState::Build(pts.topRows(1), cfg);
  const GramState two = s.Append(pts.row(1).transpose());
  EXPECT_TRUE(two.raw() == GramState::Build(pts.topRows(2), cfg).raw());
  for (int i = 1; i < 50; ++i) s = std::move(s).Append(pts.row(i).transpose());
  const GramState full = GramState::Build(pts, cfg);
  EXPECT_TRUE(s.raw() == full.raw());
  EXPECT_TRUE(s.centered() == full.centered());
}

TEST(GramStateTest, AppendDuplicateRepeatsRow) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd pts = UniformMatrix(rng, 6, 3);
  const auto s = GramState::Build(pts, KernelConfig::SquaredExponential(0.5)).Append(pts.row(2).transpose());
  EXPECT_TRUE(s.raw().row(6).head(6) == s.raw().row(2).head(6));
  EXPECT_THROW(s.Append(Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST(GramStateTest, CenteringMapReproducesCenteredGram) {
  std::mt19937_64 rng(5);
  const auto s = GramState::Build(UniformMatrix(rng, 20, 3), KernelConfig::SquaredExponential(0.5));
  Eigen::MatrixXd k = s.raw();
  s.CenterInPlace(k);
  EXPECT_LT((k - s.centered()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd batch = s.KernelVectors(s.points());
  EXPECT_LT((batch - s.raw()).cwiseAbs().maxCoeff(), 1e-12);
}

// Linear kernel, cubic link. Ground truth is beta'x, also the SIR oracle's feature.
struct CubicInstance {
  Eigen::MatrixXd x;
  Eigen::VectorXd beta;
  Eigen::VectorXd y;
};

CubicInstance MakeCubic(std::uint64_t seed, int n, int dim) {
  std::mt19937_64 rng(seed);
  CubicInstance c;
  c.beta = RandomUnitVector(rng, dim);
  c.x = NormalMatrix(rng, n, dim);
  const Eigen::VectorXd u = c.x * c.beta;
  c.y = u.array() + u.array().cube();
  return c;
}

TEST(KisirDirectionsTest, LinearKernelMatchesSirFeature) {
  const auto c = MakeCubic(6, 1000, 10);
  const auto state = GramState::Build(c.x, KernelConfig::Linear());
  const auto k = KisirDirections(state, c.y, 1);
  ASSERT_EQ(k.d_eff(), 1);
  EXPECT_GT(std::abs(Correlation(k.train_features.col(0), c.x * c.beta)), 0.95);
  const auto s = sdr::SirDirections(c.x, c.y, 1);
  EXPECT_GT(std::abs(Correlation(k.train_features.col(0), sdr::ProjectRows(s, c.x).col(0))), 0.95);
}

TEST(KisirDirectionsTest, LinearKernelProjectsFreshPointsLikeSir) {
  const auto c = MakeCubic(7, 400, 10);
  const auto state = GramState::Build(c.x, KernelConfig::Linear());
  const auto k = KisirDirections(state, c.y, 1);
  const auto s = sdr::SirDirections(c.x, c.y, 1);
  std::mt19937_64 rng(70);
  const Eigen::MatrixXd fresh = NormalMatrix(rng, 100, 10);
  EXPECT_GT(std::abs(Correlation(KisirProjectRows(k, state, fresh).col(0), sdr::ProjectRows(s, fresh).col(0))), 0.95);
}

TEST(KisirDirectionsTest, SquaredExponentialTracksActiveCoordinate) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = UniformMatrix(rng, 300, 10);
  const Eigen::VectorXd y = (4.0 * x.col(0)).array().exp();
  // Lengthscale comparable to the typical pairwise distance in 10 dimensions.
  const auto state = GramState::Build(x, KernelConfig::SquaredExponential(1.0));
  const auto k = KisirDirections(state, y, 3);
  ASSERT_GE(k.d_eff(), 1);
  EXPECT_GT(Correlation(Ranks(k.train_features.col(0)), Ranks(x.col(0))), 0.9);
}

TEST(KisirDirectionsTest, IndependentTargetsStayBelowPermutationNull) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd x = UniformMatrix(rng, 200, 5);
  const Eigen::VectorXd y = NormalMatrix(rng, 200, 1).col(0);
  const auto state = GramState::Build(x, KernelConfig::SquaredExponential(0.8));
  const double observed = KisirDirections(state, y, 2).eigenvalues(0);
  std::vector<double> null;
  Eigen::VectorXd yp = y;
  for (int rep = 0; rep < 21; ++rep) {
    std::shuffle(yp.data(), yp.data() + yp.size(), rng);
    null.push_back(KisirDirections(state, yp, 2).eigenvalues(0));
  }
  std::nth_element(null.begin(), null.begin() + 10, null.end());
  EXPECT_LT(observed, 10.0 * null[10]);
}

TEST(KisirDirectionsTest, RankBoundUnitVarianceAndConstantTargets) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd x = UniformMatrix(rng, 60, 4);
  const auto state = GramState::Build(x, KernelConfig::SquaredExponential(0.5));
  for (int d = 1; d <= 5; ++d) {
    const auto k = KisirDirections(state, x.col(1) + x.col(2).cwiseAbs2(), d);
    EXPECT_LE(k.d_eff(), d);
    for (int r = 0; r < k.d_eff(); ++r) {
      const Eigen::VectorXd f = k.train_features.col(r);
      EXPECT_NEAR((f.array() - f.mean()).square().sum() / 59.0, 1.0, 1e-10);
    }
  }
  const auto flat = KisirDirections(state, Eigen::VectorXd::Ones(60), 2);
  EXPECT_EQ(flat.d_eff(), 0);
  EXPECT_EQ(KisirProject(flat, state, x.row(0).transpose()).size(), 0);
}

TEST(KisirProjectTest, AnchorsReproduceTrainingFeatures) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd x = UniformMatrix(rng, 80, 6);
  const auto state = GramState::Build(x, KernelConfig::SquaredExponential(0.6));
  const auto k = KisirDirections(state, x.col(0).array().sin() + x.col(3).array(), 3);
  const Eigen::MatrixXd rows = KisirProjectRows(k, state, x);
  for (int i = 0; i < 80; ++i) {
    EXPECT_LT((KisirProject(k, state, x.row(i).transpose()) - k.train_features.row(i).transpose()).norm(), 1e-8);
  }
  EXPECT_LT((rows - k.train_features).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(KisirProjectTest, StaleDecompositionRejected) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd x = UniformMatrix(rng, 20, 3);
  const auto state = GramState::Build(x, KernelConfig::SquaredExponential(0.6));
  const auto k = KisirDirections(state, x.col(0), 1);
  const auto grown = state.Append(x.row(0).transpose());
  EXPECT_THROW(KisirProject(k, grown, x.row(0).transpose()), std::invalid_argument);
}

TEST(KisirProjectTest, ZeroCoefficientsGiveZeroFeatures) {
  std::mt19937_64 rng(13);
  const auto state = GramState::Build(UniformMatrix(rng, 10, 2), KernelConfig::SquaredExponential(0.6));
  KisirDecomposition k;
  k.coefficients = Eigen::MatrixXd::Zero(2, 10);
  k.anchor_count = 10;
  EXPECT_EQ(KisirProject(k, state, Eigen::Vector2d(0.3, 0.4)).norm(), 0.0);
}

TEST(KisirDirectionsTest, PermutationInvariance) {
  std::mt19937_64 rng(14);
  const Eigen::MatrixXd x = UniformMatrix(rng, 70, 5);
  const Eigen::VectorXd y = x.col(0) - 2.0 * x.col(4).cwiseAbs2();
  std::vector<int> perm(70);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd xp(70, 5);
  Eigen::VectorXd yp(70);
  for (int i = 0; i < 70; ++i) {
    xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    yp(i) = y(perm[static_cast<std::size_t>(i)]);
  }
  const auto cfg = KernelConfig::SquaredExponential(0.7);
  const auto a = KisirDirections(GramState::Build(x, cfg), y, 2);
  const auto b = KisirDirections(GramState::Build(xp, cfg), yp, 2);
  ASSERT_EQ(a.d_eff(), b.d_eff());
  for (int i = 0; i < 70; ++i) {
    EXPECT_LT((a.train_features.row(perm[static_cast<std::size_t>(i)]) - b.train_features.row(i)).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(KisirDirectionsTest, EigenproblemCostIndependentOfDimension) {
  std::mt19937_64 rng(15);
  auto median_seconds = [&](int dim) {
    const Eigen::MatrixXd x = UniformMatrix(rng, 400, dim);
    const Eigen::VectorXd y = x.col(0);
    const auto state = GramState::Build(x, KernelConfig::SquaredExponential(0.4 * std::sqrt(dim)));
    std::vector<double> times;
    for (int rep = 0; rep < 9; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto k = KisirDirections(state, y, 10);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      EXPECT_GE(k.d_eff(), 1);
    }
    return *std::min_element(times.begin(), times.end());
  };
  const double small = median_seconds(200);
  const double large = median_seconds(2000);
  EXPECT_LT(large, 1.2 * small);
  EXPECT_GT(large, small / 1.2);
}

}  // namespace
}  // namespace hdbo::kisir
