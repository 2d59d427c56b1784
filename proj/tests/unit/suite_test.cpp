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
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "hdbo/suite.hpp"

namespace hdbo::bench {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hdbo_suite_test_" + name);
  fs::remove_all(dir);
  return dir;
}

SuiteCell SmallCell(driver::Method m, std::vector<std::uint64_t> seeds, int budget = 10) {
  SuiteCell cell;
  cell.problem = "branin";
  cell.dim = 6;
  cell.config.method = m;
  cell.config.budget = budget;
  cell.config.init_n = 5;
  cell.config.target_dim = 2;
  cell.config.cmaes.max_generations = 10;
  cell.seeds = std::move(seeds);
  return cell;
}

driver::RegretTrace TraceWithRegret(std::vector<double> r) {
  driver::RegretTrace t;
  t.simple_regret = r;
  t.values = r;
  t.best_so_far = r;
  return t;
}

TEST(AggregateRegretTest, MeanAndStandardError) {
  std::vector<double> mean, se;
  AggregateRegret({TraceWithRegret({3, 1}), TraceWithRegret({1, 1}), TraceWithRegret({2, 1})}, mean, se);
  ASSERT_EQ(mean.size(), 2u);
  EXPECT_DOUBLE_EQ(mean[0], 2.0);
  EXPECT_DOUBLE_EQ(se[0], 1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(mean[1], 1.0);
  EXPECT_DOUBLE_EQ(se[1], 0.0);
  AggregateRegret({TraceWithRegret({0.5})}, mean, se);
  EXPECT_EQ(se[0], 0.0);
}

TEST(RunSuiteTest, MeansLieWithinRunRange) {
  SuiteSpec spec;
  spec.cells.push_back(SmallCell(driver::Method::kRandom, {1, 2, 3}, 40));
  const BenchmarkReport report = RunSuite(spec);
  ASSERT_TRUE(report.ok());
  const CellResult& c = report.cells[0];
  ASSERT_EQ(c.mean_regret.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    double lo = 1e300, hi = -1e300;
    for (const auto& t : c.traces) {
      lo = std::min(lo, t.simple_regret[i]);
      hi = std::max(hi, t.simple_regret[i]);
    }
    EXPECT_GE(c.mean_regret[i], lo);
    EXPECT_LE(c.mean_regret[i], hi);
  }
}

TEST(RunSuiteTest, FailedCellDoesNotAbortOthers) {
  SuiteSpec spec;
  spec.cells.push_back(SmallCell(driver::Method::kRandom, {1}));
  SuiteCell bad = SmallCell(driver::Method::kFullGpUcb, {1});
  bad.dim = driver::kFullGpMaxDim + 10;
  spec.cells.push_back(bad);
  const BenchmarkReport report = RunSuite(spec);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.cells[0].ok());
  ASSERT_FALSE(report.cells[1].ok());
  EXPECT_TRUE(report.cells[1].traces.empty());
}

TEST(ExportCsvTest, EmptyReportWritesHeadersOnly) {
  const fs::path dir = ScratchDir("empty");
  ExportCsv(BenchmarkReport{}, dir);
  const auto runs = ReadCsv(dir / "runs.csv");
  const auto summary = ReadCsv(dir / "summary.csv");
  ASSERT_EQ(runs.size(), 1u);
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_EQ(runs[0], (std::vector<std::string>{"problem", "method", "D", "d", "seed", "iteration", "y", "best_so_far",
                                               "simple_regret"}));
  EXPECT_EQ(summary[0], (std::vector<std::string>{"problem", "method", "D", "d", "iteration", "mean_regret",
                                                  "stderr_regret", "n_runs"}));
}

TEST(ExportCsvTest, RowCountsAndRoundTrip) {
  SuiteSpec spec;
  spec.cells.push_back(SmallCell(driver::Method::kSirBo, {4, 9}, 10));
  spec.cells.push_back(SmallCell(driver::Method::kRandom, {1, 2, 3}, 12));
  const BenchmarkReport report = RunSuite(spec);
  ASSERT_TRUE(report.ok());
  const fs::path dir = ScratchDir("roundtrip");
  ExportCsv(report, dir);
  const auto runs = ReadCsv(dir / "runs.csv");
  const auto summary = ReadCsv(dir / "summary.csv");
  EXPECT_EQ(runs.size(), 1u + 2 * 10 + 3 * 12);
  EXPECT_EQ(summary.size(), 1u + 10 + 12);

  // Recompute mean and standard error per (method, iteration) from the raw rows.
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    groups[{runs[r][1], std::stoi(runs[r][5])}].push_back(std::stod(runs[r][8]));
  }
  for (std::size_t r = 1; r < summary.size(); ++r) {
    const auto& g = groups.at({summary[r][1], std::stoi(summary[r][4])});
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double ss = 0.0;
    for (double v : g) ss += (v - mean) * (v - mean);
    const double se = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1) / static_cast<double>(g.size())) : 0.0;
    EXPECT_NEAR(std::stod(summary[r][5]), mean, 1e-12);
    EXPECT_NEAR(std::stod(summary[r][6]), se, 1e-12);
    EXPECT_EQ(std::stoul(summary[r][7]), g.size());
  }

  // Values survive the text round trip exactly.
  const auto& t = report.cells[1].traces[2];
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(std::stod(runs[1 + 20 + 2 * 12 + static_cast<std::size_t>(i)][6]), t.values[static_cast<std::size_t>(i)]);
  }
}

TEST(RunSuiteTest, RepeatedRunsExportIdenticalBytes) {
  SuiteSpec spec;
  spec.threads = 2;
  spec.cells.push_back(SmallCell(driver::Method::kKisirBo, {1, 2}, 10));
  spec.cells.push_back(SmallCell(driver::Method::kSirBo, {3}, 10));
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const fs::path a = ScratchDir("det_a"), b = ScratchDir("det_b");
  ExportCsv(RunSuite(spec), a);
  spec.threads = 1;
  ExportCsv(RunSuite(spec), b);
  EXPECT_EQ(slurp(a / "runs.csv"), slurp(b / "runs.csv"));
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
}

TEST(ParseSeedsTest, CountAndList) {
  EXPECT_EQ(ParseSeeds("3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(ParseSeeds("7, 0,42"), (std::vector<std::uint64_t>{7, 0, 42}));
  EXPECT_EQ(ParseSeeds("5,"), (std::vector<std::uint64_t>{5}));
  EXPECT_THROW(ParseSeeds("0"), std::invalid_argument);
  EXPECT_THROW(ParseSeeds("a,b"), std::invalid_argument);
  EXPECT_THROW(ParseSeeds(""), std::invalid_argument);
}

TEST(ParseSuiteSpecTest, DefaultsAndCells) {
  std::istringstream in(R"(# comment
threads = 3
problem = trimodal
budget = 60   # trailing comment
init = 20
seeds = 4

[cell]
method = sir-bo
D = 200
d = 10

[cell]
problem = branin
method = kisir-bo
D = 2000
seeds = 1,5
beta = 2.5
beta_schedule = log
start = center
sir_margin = -1
)");
  const SuiteSpec s = ParseSuiteSpec(in);
  EXPECT_EQ(s.threads, 3);
  ASSERT_EQ(s.cells.size(), 2u);
  EXPECT_EQ(s.cells[0].problem, "trimodal");
  EXPECT_EQ(s.cells[0].dim, 200);
  EXPECT_EQ(s.cells[0].config.budget, 60);
  EXPECT_EQ(s.cells[0].config.init_n, 20);
  EXPECT_EQ(s.cells[0].config.target_dim, 10);
  EXPECT_EQ(s.cells[0].seeds.size(), 4u);
  EXPECT_EQ(s.cells[1].problem, "branin");
  EXPECT_EQ(s.cells[1].config.method, driver::Method::kKisirBo);
  EXPECT_EQ(s.cells[1].seeds, (std::vector<std::uint64_t>{1, 5}));
  EXPECT_EQ(s.cells[1].config.ucb.beta, 2.5);
  EXPECT_EQ(s.cells[1].config.ucb.schedule, acquisition::BetaSchedule::kLogGrowth);
  EXPECT_FALSE(s.cells[1].config.start_from_incumbent);
  EXPECT_TRUE(s.cells[0].config.start_from_incumbent);
  EXPECT_EQ(s.cells[1].config.sir_feature_margin, -1.0);
  EXPECT_EQ(s.cells[0].config.sir_feature_margin, driver::RunConfig{}.sir_feature_margin);
}

TEST(ParseSuiteSpecTest, ErrorsNameTheLine) {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      ParseSuiteSpec(in);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(error_of("[cell]\nbogus = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[cell]\nD = ten\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[cell]\nmethod = rembo\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[cell]\nthreads = 2\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("problem\n").find("line 1"), std::string::npos);
  EXPECT_FALSE(error_of("problem = branin\n").empty());
  EXPECT_FALSE(error_of("[cell]\nbudget = 10\ninit = 10\n").empty());
}

TEST(LoadSuiteSpecTest, MissingFileThrows) {
  EXPECT_THROW(LoadSuiteSpec("/nonexistent/hdbo.spec"), std::runtime_error);
}

}  // namespace
}  // namespace hdbo::bench
