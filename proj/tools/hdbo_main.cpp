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

// hdbo: run SIR-BO / KISIR-BO / baselines on the synthetic benchmarks and
// export regret traces as CSV.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hdbo/driver.hpp"
#include "hdbo/suite.hpp"

namespace {

int Report(const hdbo::bench::BenchmarkReport& report, const std::string& out) {
  hdbo::bench::ExportCsv(report, out);
  int failed = 0;
  for (const auto& cell : report.cells) {
    const auto method = hdbo::driver::MethodName(cell.cell.config.method);
    if (!cell.ok()) {
      std::cerr << "FAILED " << cell.cell.problem << " D=" << cell.cell.dim << " " << method << ": " << *cell.error
                << "\n";
      ++failed;
      continue;
    }
    std::printf("%-9s D=%-6d d=%-3d %-12s runs=%-3zu final mean regret %.6g (stderr %.3g)  %.1fs\n",
                cell.cell.problem.c_str(), cell.cell.dim, cell.cell.config.target_dim, std::string(method).c_str(),
                cell.traces.size(), cell.mean_regret.back(), cell.stderr_regret.back(), cell.wall_seconds);
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional Bayesian optimization with sliced inverse regression"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one problem/method combination over several seeds");
  hdbo::bench::SuiteCell cell;
  std::string method = "sir-bo";
  std::string seeds = "20";
  std::string out = "out";
  bool quick = false;
  int threads = 0;
  run->add_option("--problem", cell.problem, "branin or trimodal")
      ->check(CLI::IsMember({"branin", "trimodal"}))
      ->required();
  run->add_option("--D", cell.dim, "Ambient dimension")->required()->check(CLI::PositiveNumber);
  run->add_option("--d", cell.config.target_dim, "Assumed subspace dimension")->check(CLI::PositiveNumber);
  run->add_option("--method", method, "sir-bo, kisir-bo, random or full-gp-ucb")
      ->check(CLI::IsMember({"sir-bo", "kisir-bo", "random", "full-gp-ucb"}));
  run->add_option("--budget", cell.config.budget, "Total objective evaluations");
  run->add_option("--init", cell.config.init_n, "Initial random evaluations");
  run->add_option("--seeds", seeds, "Seed count (1..N) or comma-separated list");
  run->add_option("--beta", cell.config.ucb.beta, "UCB beta (fixed schedule)");
  run->add_option("--sir-refresh", cell.config.sir_refresh_every, "Recompute SIR directions every N iterations");
  run->add_option("--hyper-refresh", cell.config.hyper_refresh_every, "Refit GP hyperparameters every N iterations");
  run->add_option("--input-lengthscale", cell.config.input_lengthscale, "KISIR input kernel lengthscale");
  run->add_option("--sir-margin", cell.config.sir_feature_margin,
                  "SIR-BO acquisition margin around the projected data (negative disables)");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_option("--out", out, "Output directory for runs.csv and summary.csv");
  run->add_flag("--quick", quick, "CI profile: 5 seeds, budget 200");

  // suite
  auto* suite = app.add_subcommand("suite", "Run every cell of a suite spec file");
  std::string spec_path;
  std::string suite_out = "out";
  suite->add_option("--spec", spec_path, "Suite spec file")->required()->check(CLI::ExistingFile);
  suite->add_option("--out", suite_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cell.config.method = hdbo::driver::ParseMethod(method);
      if (quick) {
        seeds = "5";
        cell.config.budget = 200;
      }
      cell.seeds = hdbo::bench::ParseSeeds(seeds);
      cell.config.Validate();
      hdbo::bench::SuiteSpec spec;
      spec.cells.push_back(cell);
      spec.threads = threads;
      return Report(hdbo::bench::RunSuite(spec), out);
    }
    const hdbo::bench::SuiteSpec spec = hdbo::bench::LoadSuiteSpec(spec_path);
    return Report(hdbo::bench::RunSuite(spec), suite_out);
  } catch (const std::exception& e) {
    std::cerr << "hdbo: " << e.what() << "\n";
    return 2;
  }
}
