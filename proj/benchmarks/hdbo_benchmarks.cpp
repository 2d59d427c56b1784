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

#include <random>

#include <benchmark/benchmark.h>
#include <Eigen/Core>

#include "hdbo/cmaes.hpp"
#include "hdbo/gp.hpp"
#include "hdbo/kisir.hpp"
#include "hdbo/sdr.hpp"

namespace {

Eigen::MatrixXd Uniform(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

void BM_GpFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = Uniform(rng, n, 10);
  const Eigen::VectorXd y = x.col(0).array().sin();
  const auto cfg = hdbo::gp::KernelConfig::SquaredExponential(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hdbo::gp::GpFit(x, y, cfg, 1e-3));
}
BENCHMARK(BM_GpFit)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_FitHyperparameters(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = Uniform(rng, n, 10);
  const Eigen::VectorXd y = x.col(0).array().sin();
  const auto space = hdbo::gp::HyperSearchSpace::FromData(x, y);
  for (auto _ : state) benchmark::DoNotOptimize(hdbo::gp::FitHyperparameters(x, y, space));
}
BENCHMARK(BM_FitHyperparameters)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SirDirections(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = Uniform(rng, n, dim);
  const Eigen::VectorXd y = x.col(0) + x.col(1).cwiseAbs2();
  for (auto _ : state) benchmark::DoNotOptimize(hdbo::sdr::SirDirections(x, y, 10));
}
BENCHMARK(BM_SirDirections)->Args({500, 20})->Args({500, 200})->Args({500, 2000})->Unit(benchmark::kMillisecond);

void BM_KisirDirections(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x = Uniform(rng, n, 200);
  const auto gram = hdbo::kisir::GramState::Build(x, hdbo::gp::KernelConfig::SquaredExponential(0.1 * std::sqrt(200.0)));
  const Eigen::VectorXd y = x.col(0);
  for (auto _ : state) benchmark::DoNotOptimize(hdbo::kisir::KisirDirections(gram, y, 10));
}
BENCHMARK(BM_KisirDirections)->Arg(100)->Arg(300)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GramAppend(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = Uniform(rng, 300, dim);
  const auto gram = hdbo::kisir::GramState::Build(x, hdbo::gp::KernelConfig::SquaredExponential(1.0));
  const Eigen::VectorXd extra = Uniform(rng, dim, 1).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(gram.Append(extra));
}
BENCHMARK(BM_GramAppend)->Arg(200)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_CmaesSphere(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(dim, 0.4);
  hdbo::acquisition::BatchObjective f = [&](const Eigen::MatrixXd& p) {
    return Eigen::VectorXd(-(p.rowwise() - c.transpose()).rowwise().squaredNorm());
  };
  hdbo::acquisition::CmaesConfig cfg;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hdbo::acquisition::MaximizeAcquisition(f, hdbo::Box::Unit(dim), cfg));
}
BENCHMARK(BM_CmaesSphere)->Arg(20)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
