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
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hdbo/problems.hpp"
#include "hdbo/suite.hpp"

namespace hdbo::bench {

bool BenchmarkReport::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok(); });
}

void AggregateRegret(const std::vector<driver::RegretTrace>& traces, std::vector<double>& mean,
                     std::vector<double>& stderr_out) {
  mean.clear();
  stderr_out.clear();
  if (traces.empty()) return;
  const std::size_t len = traces.front().simple_regret.size();
  for (const auto& t : traces) {
    if (t.simple_regret.size() != len) throw std::invalid_argument("AggregateRegret: traces differ in length");
  }
  const double r = static_cast<double>(traces.size());
  mean.resize(len);
  stderr_out.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& t : traces) sum += t.simple_regret[i];
    const double m = sum / r;
    double ss = 0.0;
    for (const auto& t : traces) ss += (t.simple_regret[i] - m) * (t.simple_regret[i] - m);
    mean[i] = m;
    stderr_out[i] = traces.size() > 1 ? std::sqrt(ss / (r - 1.0)) / std::sqrt(r) : 0.0;
  }
}

BenchmarkReport RunSuite(const SuiteSpec& spec) {
  struct Job {
    std::size_t cell;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  BenchmarkReport report;
  report.cells.resize(spec.cells.size());
  std::vector<std::vector<std::string>> errors(spec.cells.size());
  std::vector<std::vector<double>> seconds(spec.cells.size());
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    report.cells[c].cell = spec.cells[c];
    report.cells[c].traces.resize(spec.cells[c].seeds.size());
    seconds[c].assign(spec.cells[c].seeds.size(), 0.0);
    for (std::size_t s = 0; s < spec.cells[c].seeds.size(); ++s) jobs.push_back({c, s});
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const auto [c, s] = jobs[j];
      const SuiteCell& cell = spec.cells[c];
      const auto start = std::chrono::steady_clock::now();
      try {
        driver::RunConfig cfg = cell.config;
        cfg.seed = cell.seeds[s];
        cfg.record_points = false;
        const Problem problem = MakeProblem(cell.problem, cell.dim, cfg.seed);
        report.cells[c].traces[s] = driver::Run(problem, cfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        errors[c].push_back("seed " + std::to_string(cell.seeds[s]) + ": " + e.what());
      }
      seconds[c][s] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  int threads = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    CellResult& result = report.cells[c];
    for (double s : seconds[c]) result.wall_seconds += s;
    if (!errors[c].empty()) {
      std::sort(errors[c].begin(), errors[c].end());
      result.error = errors[c].front();
      result.traces.clear();
      continue;
    }
    AggregateRegret(result.traces, result.mean_regret, result.stderr_regret);
  }
  return report;
}

}  // namespace hdbo::bench
