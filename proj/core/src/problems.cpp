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

#include "hdbo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hdbo::bench {

double Branin(const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (u.size() != 2) throw std::invalid_argument("Branin: expects 2 coordinates");
  constexpr double pi = std::numbers::pi;
  constexpr double a = 1.0;
  constexpr double b = 5.1 / (4.0 * pi * pi);
  constexpr double c = 5.0 / pi;
  constexpr double r = 6.0;
  constexpr double s = 10.0;
  constexpr double t = 1.0 / (8.0 * pi);
  const double inner = u(1) - b * u(0) * u(0) + c * u(0) - r;
  return a * inner * inner + s * (1.0 - t) * std::cos(u(0)) + s;
}

double Trimodal(const Eigen::Ref<const Eigen::VectorXd>& u, const std::array<Eigen::VectorXd, 3>& centers,
                const std::array<double, 3>& weights) {
  const double de = static_cast<double>(u.size());
  const double var = 0.01 * std::pow(de, 0.1);
  const double log_norm = -0.5 * de * std::log(2.0 * std::numbers::pi * var);
  std::array<double, 3> terms{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (centers[k].size() != u.size()) throw std::invalid_argument("Trimodal: centre dimension mismatch");
    terms[k] = std::log(weights[k]) + log_norm - 0.5 * (u - centers[k]).squaredNorm() / var;
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

std::array<Eigen::VectorXd, 3> DefaultTrimodalCenters(int intrinsic_dim) {
  return {Eigen::VectorXd::Constant(intrinsic_dim, 0.2), Eigen::VectorXd::Constant(intrinsic_dim, 0.5),
          Eigen::VectorXd::Constant(intrinsic_dim, 0.8)};
}

Problem BraninProblem() {
  Problem p;
  p.name = "branin";
  p.dim = 2;
  p.intrinsic_dim = 2;
  p.bounds = {Eigen::Vector2d(-5.0, 0.0), Eigen::Vector2d(10.0, 15.0)};
  p.objective = [](const Eigen::VectorXd& u) { return Branin(u); };
  p.known_optimum = kBraninMinimum;
  p.sense = Sense::kMinimize;
  p.active_indices = {0, 1};
  return p;
}

Problem TrimodalProblem(int intrinsic_dim) {
  if (intrinsic_dim < 1) throw std::invalid_argument("TrimodalProblem: intrinsic dimension must be >= 1");
  Problem p;
  p.name = "trimodal";
  p.dim = intrinsic_dim;
  p.intrinsic_dim = intrinsic_dim;
  p.bounds = Box::Unit(intrinsic_dim);
  const auto centers = DefaultTrimodalCenters(intrinsic_dim);
  p.objective = [centers](const Eigen::VectorXd& u) { return Trimodal(u, centers); };
  p.known_optimum = Trimodal(centers[1], centers);
  p.sense = Sense::kMaximize;
  p.active_indices.resize(static_cast<std::size_t>(intrinsic_dim));
  std::iota(p.active_indices.begin(), p.active_indices.end(), 0);
  return p;
}

Problem Embed(const Problem& base, int dim, std::uint64_t seed, const std::optional<std::vector<int>>& indices) {
  const int de = base.dim;
  if (dim < de) {
    std::ostringstream os;
    os << "Embed: target dimension " << dim << " is below the problem dimension " << de;
    throw std::invalid_argument(os.str());
  }
  std::vector<int> active;
  if (indices) {
    active = *indices;
    if (static_cast<int>(active.size()) != de) throw std::invalid_argument("Embed: wrong number of indices");
    std::vector<int> sorted = active;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
        sorted.back() >= dim) {
      throw std::invalid_argument("Embed: indices must be distinct and inside [0, D)");
    }
  } else {
    // Partial Fisher-Yates over [0, D).
    std::vector<int> pool(static_cast<std::size_t>(dim));
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < de; ++k) {
      std::uniform_int_distribution<int> pick(k, dim - 1);
      std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    active.assign(pool.begin(), pool.begin() + de);
  }

  Problem p;
  p.name = base.name;
  p.dim = dim;
  p.intrinsic_dim = base.intrinsic_dim;
  p.bounds = Box::Unit(dim);
  p.known_optimum = base.known_optimum;
  p.sense = base.sense;
  p.active_indices = active;
  const Eigen::VectorXd lower = base.bounds.lower;
  const Eigen::VectorXd width = base.bounds.Width();
  p.objective = [active, lower, width, f = base.objective](const Eigen::VectorXd& x) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      u(i) = lower(i) + x(active[k]) * width(i);
    }
    return f(u);
  };
  return p;
}

Problem MakeProblem(const std::string& name, int dim, std::uint64_t seed) {
  if (name == "branin") return Embed(BraninProblem(), dim, seed);
  if (name == "trimodal") return Embed(TrimodalProblem(2), dim, seed);
  throw std::invalid_argument("MakeProblem: unknown problem '" + name + "'");
}

}  // namespace hdbo::bench
