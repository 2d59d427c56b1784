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

#ifndef HDBO_SUITE_HPP_
#define HDBO_SUITE_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "hdbo/driver.hpp"

namespace hdbo::bench {

/// One (problem, method, configuration) combination repeated over seeds.
struct SuiteCell {
  std::string problem = "branin";
  int dim = 20;
  driver::RunConfig config;
  std::vector<std::uint64_t> seeds;
};

struct SuiteSpec {
  std::vector<SuiteCell> cells;
  int threads = 0;  // 0 selects the hardware concurrency
};

struct CellResult {
  SuiteCell cell;
  std::vector<driver::RegretTrace> traces;  // one per seed, in seed order
  std::vector<double> mean_regret;          // per iteration
  std::vector<double> stderr_regret;        // sample std / sqrt(R)
  std::optional<std::string> error;
  double wall_seconds = 0.0;

  bool ok() const { return !error.has_value(); }
};

struct BenchmarkReport {
  std::vector<CellResult> cells;

  bool ok() const;
};

/// Mean and standard error per iteration across equally long traces.
void AggregateRegret(const std::vector<driver::RegretTrace>& traces, std::vector<double>& mean,
                     std::vector<double>& stderr_out);

/// Executes every (cell, seed) run, concurrently across runs. A failing run
/// marks its cell with an error; other cells are unaffected.
BenchmarkReport RunSuite(const SuiteSpec& spec);

/// Writes runs.csv and summary.csv into `dir` (created if missing).
void ExportCsv(const BenchmarkReport& report, const std::filesystem::path& dir);

/// Parses the line-oriented key=value suite format documented in the README.
SuiteSpec ParseSuiteSpec(std::istream& in);
SuiteSpec LoadSuiteSpec(const std::filesystem::path& path);

/// "5" means seeds 1..5; "3,7,11" is an explicit list.
std::vector<std::uint64_t> ParseSeeds(const std::string& text);

}  // namespace hdbo::bench

#endif  // HDBO_SUITE_HPP_
