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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hdbo/suite.hpp"

namespace hdbo::bench {

namespace {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream OpenOrThrow(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("ExportCsv: cannot write " + path.string());
  return out;
}

}  // namespace

void ExportCsv(const BenchmarkReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("ExportCsv: cannot create " + dir.string() + ": " + ec.message());

  std::ofstream runs = OpenOrThrow(dir / "runs.csv");
  std::ofstream summary = OpenOrThrow(dir / "summary.csv");
  runs << "problem,method,D,d,seed,iteration,y,best_so_far,simple_regret\n";
  summary << "problem,method,D,d,iteration,mean_regret,stderr_regret,n_runs\n";

  for (const CellResult& result : report.cells) {
    if (!result.ok()) continue;
    const SuiteCell& cell = result.cell;
    std::ostringstream prefix;
    prefix << cell.problem << ',' << driver::MethodName(cell.config.method) << ',' << cell.dim << ','
           << cell.config.target_dim << ',';
    for (std::size_t s = 0; s < result.traces.size(); ++s) {
      const driver::RegretTrace& t = result.traces[s];
      for (int i = 0; i < t.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        runs << prefix.str() << cell.seeds[s] << ',' << i + 1 << ',' << FormatDouble(t.values[k]) << ','
             << FormatDouble(t.best_so_far[k]) << ',' << FormatDouble(t.simple_regret[k]) << '\n';
      }
    }
    for (std::size_t i = 0; i < result.mean_regret.size(); ++i) {
      summary << prefix.str() << i + 1 << ',' << FormatDouble(result.mean_regret[i]) << ','
              << FormatDouble(result.stderr_regret[i]) << ',' << result.traces.size() << '\n';
    }
  }
  runs.flush();
  summary.flush();
  if (!runs || !summary) throw std::runtime_error("ExportCsv: write failed in " + dir.string());
}

}  // namespace hdbo::bench
