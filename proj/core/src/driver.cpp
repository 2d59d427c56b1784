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

#include "hdbo/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hdbo/gp.hpp"
#include "hdbo/kisir.hpp"
#include "hdbo/sdr.hpp"

namespace hdbo::driver {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(double& sink) : sink_(sink), start_(Clock::now()) {}
  ~StageTimer() { sink_ += std::chrono::duration<double>(Clock::now() - start_).count(); }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  double& sink_;
  Clock::time_point start_;
};

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Shared bookkeeping for one optimization run: the observation set (stored
// both raw and rescaled to the unit box), the internal maximization targets
// and the regret trace.
class Session {
 public:
  Session(const bench::Problem& problem, const RunConfig& cfg)
      : problem_(problem), cfg_(cfg), rng_(cfg.seed), width_(problem.bounds.Width()) {
    problem.bounds.Validate();
    if (problem.bounds.dim() != problem.dim) throw std::invalid_argument("Run: problem bounds do not match its dimension");
    cfg.Validate();
    x_.resize(cfg.budget, problem.dim);
    unit_.resize(cfg.budget, problem.dim);
    h_.resize(cfg.budget);
    trace_.values.reserve(static_cast<std::size_t>(cfg.budget));
    trace_.best_so_far.reserve(static_cast<std::size_t>(cfg.budget));
    trace_.simple_regret.reserve(static_cast<std::size_t>(cfg.budget));
  }

  int size() const { return n_; }
  bool done() const { return n_ >= cfg_.budget; }
  auto inputs() const { return x_.topRows(n_); }
  auto unit_inputs() const { return unit_.topRows(n_); }
  auto targets() const { return h_.head(n_); }

  Eigen::VectorXd UniformPoint() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd z(problem_.dim);
    for (int i = 0; i < problem_.dim; ++i) z(i) = u(rng_);
    return FromUnit(z);
  }

  Eigen::VectorXd FromUnit(const Eigen::VectorXd& z) const {
    return problem_.bounds.lower.array() + z.array() * width_.array();
  }

  Eigen::MatrixXd ToUnitRows(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = x.rowwise() - problem_.bounds.lower.transpose();
    for (int i = 0; i < problem_.dim; ++i) {
      if (width_(i) > 0.0) z.col(i) /= width_(i);
      else z.col(i).setZero();
    }
    return z;
  }

  void InitialDesign() {
    for (int k = 0; k < cfg_.init_n; ++k) Evaluate(UniformPoint());
  }

  void Evaluate(const Eigen::VectorXd& x) {
    double y = 0.0;
    {
      StageTimer timer(trace_.times.objective);
      y = problem_.objective(x);
    }
    if (!std::isfinite(y)) throw std::runtime_error("Run: objective returned a non-finite value");
    x_.row(n_) = x.transpose();
    unit_.row(n_) = ToUnitRows(x.transpose()).row(0);
    const bool maximize = problem_.sense == bench::Sense::kMaximize;
    h_(n_) = maximize ? y : -y;
    ++n_;

    const bool improved = trace_.best_so_far.empty() ||
                          (maximize ? y > trace_.best_so_far.back() : y < trace_.best_so_far.back());
    if (improved) incumbent_ = n_ - 1;
    const double best = improved ? y : trace_.best_so_far.back();
    if (cfg_.record_points) trace_.points.push_back(x);
    trace_.values.push_back(y);
    trace_.best_so_far.push_back(best);
    double regret = std::numeric_limits<double>::quiet_NaN();
    if (problem_.known_optimum) {
      regret = std::max(0.0, maximize ? *problem_.known_optimum - best : best - *problem_.known_optimum);
    }
    trace_.simple_regret.push_back(regret);
  }

  Eigen::VectorXd Incumbent() const { return x_.row(incumbent_).transpose(); }

  acquisition::CmaesConfig SearchConfig(int iteration) const {
    acquisition::CmaesConfig c = cfg_.cmaes;
    c.seed = SplitMix64(cfg_.seed ^ SplitMix64(static_cast<std::uint64_t>(iteration) + 1));
    if (cfg_.start_from_incumbent) c.start = Incumbent();
    return c;
  }

  void Fallback() {
    trace_.fallback_iterations.push_back(n_);
    Evaluate(UniformPoint());
  }

  RegretTrace& trace() { return trace_; }
  const RunConfig& config() const { return cfg_; }
  const bench::Problem& problem() const { return problem_; }

 private:
  const bench::Problem& problem_;
  const RunConfig& cfg_;
  std::mt19937_64 rng_;
  Eigen::VectorXd width_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd unit_;
  Eigen::VectorXd h_;
  int n_ = 0;
  int incumbent_ = 0;
  RegretTrace trace_;
};

// GP on low-dimensional features with periodically refreshed hyperparameters.
class SurrogateFitter {
 public:
  explicit SurrogateFitter(int refresh_every) : refresh_every_(refresh_every) {}

  gp::GpModel Fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets, int iteration, double& timer_sink) {
    StageTimer timer(timer_sink);
    if (!hyper_ || iteration - last_refresh_ >= refresh_every_) {
      hyper_ = gp::FitHyperparameters(features, targets, gp::HyperSearchSpace::FromData(features, targets));
      last_refresh_ = iteration;
    }
    return gp::GpFit(features, targets, hyper_->kernel, hyper_->noise_std);
  }

 private:
  int refresh_every_;
  int last_refresh_ = 0;
  std::optional<gp::HyperFit> hyper_;
};

// Runs CMA-ES on x -> UCB(features(x)) and evaluates the winner.
// Axis-aligned region of feature space the acquisition may use. Outside it the
// UCB is taken at the nearest admissible feature and lowered in proportion to
// the overshoot, so the search sees a continuous surface pointing back inside.
struct FeatureRegion {
  Eigen::RowVectorXd lower;
  Eigen::RowVectorXd upper;
  double slope = 0.0;

  static FeatureRegion Around(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets, double margin) {
    FeatureRegion r;
    const Eigen::RowVectorXd lo = features.colwise().minCoeff();
    const Eigen::RowVectorXd hi = features.colwise().maxCoeff();
    const Eigen::RowVectorXd pad = margin * (hi - lo);
    r.lower = lo - pad;
    r.upper = hi + pad;
    r.slope = std::max(targets.maxCoeff() - targets.minCoeff(), 1e-12);
    return r;
  }

  // Clamps rows in place and returns the scaled overshoot of each row.
  Eigen::VectorXd Confine(Eigen::MatrixXd& f) const {
    Eigen::VectorXd excess = Eigen::VectorXd::Zero(f.rows());
    const Eigen::RowVectorXd extent = (upper - lower).cwiseMax(1e-12);
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      for (Eigen::Index j = 0; j < f.cols(); ++j) {
        const double v = f(i, j);
        const double c = std::clamp(v, lower(j), upper(j));
        excess(i) += std::abs(v - c) / extent(j);
        f(i, j) = c;
      }
    }
    return excess;
  }
};

template <typename FeatureMap>
void ProposeAndEvaluate(Session& session, const gp::GpModel& model, int iteration, int d_eff, FeatureMap&& features,
                        const std::optional<FeatureRegion>& region = std::nullopt) {
  const RunConfig& cfg = session.config();
  acquisition::MaximizeResult best;
  {
    StageTimer timer(session.trace().times.acquisition);
    acquisition::BatchObjective objective = [&](const Eigen::MatrixXd& points) {
      Eigen::VectorXd mean, var;
      Eigen::MatrixXd f = features(points);
      if (!region) {
        model.PredictBatch(f, mean, var);
        return acquisition::UcbBatch(mean, var, cfg.ucb, iteration + 1, d_eff);
      }
      const Eigen::VectorXd excess = region->Confine(f);
      model.PredictBatch(f, mean, var);
      Eigen::VectorXd value = acquisition::UcbBatch(mean, var, cfg.ucb, iteration + 1, d_eff);
      return Eigen::VectorXd(value - region->slope * excess);
    };
    best = acquisition::MaximizeAcquisition(objective, session.problem().bounds, session.SearchConfig(iteration));
  }
  session.Evaluate(best.x);
}

}  // namespace

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kSirBo:
      return "sir-bo";
    case Method::kKisirBo:
      return "kisir-bo";
    case Method::kRandom:
      return "random";
    case Method::kFullGpUcb:
      return "full-gp-ucb";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "sir-bo") return Method::kSirBo;
  if (name == "kisir-bo") return Method::kKisirBo;
  if (name == "random") return Method::kRandom;
  if (name == "full-gp-ucb") return Method::kFullGpUcb;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void RunConfig::Validate() const {
  if (!(init_n > 0 && init_n < budget)) throw std::invalid_argument("RunConfig: need 0 < init_n < budget");
  if (target_dim < 1) throw std::invalid_argument("RunConfig: target_dim must be >= 1");
  if (sir_refresh_every < 1 || hyper_refresh_every < 1) {
    throw std::invalid_argument("RunConfig: refresh intervals must be >= 1");
  }
  if (!(input_lengthscale > 0.0)) throw std::invalid_argument("RunConfig: input_lengthscale must be positive");
  if (std::isnan(sir_feature_margin)) throw std::invalid_argument("RunConfig: sir_feature_margin is NaN");
  ucb.Validate();
  cmaes.Validate();
}

RegretTrace RunSirBo(const bench::Problem& problem, const RunConfig& cfg) {
  Session session(problem, cfg);
  if (cfg.init_n < cfg.target_dim + 1) throw std::invalid_argument("RunSirBo: init_n must be at least d + 1");
  session.InitialDesign();
  SurrogateFitter surrogate(cfg.hyper_refresh_every);
  sdr::SirDecomposition decomp;

  for (int iteration = 0; !session.done(); ++iteration) {
    if (iteration % cfg.sir_refresh_every == 0) {
      StageTimer timer(session.trace().times.subspace);
      decomp = sdr::SirDirections(session.unit_inputs(), session.targets(), cfg.target_dim);
    }
    if (decomp.d_eff() == 0) {
      session.Fallback();
      continue;
    }
    const Eigen::MatrixXd features = sdr::ProjectRows(decomp, session.unit_inputs());
    const gp::GpModel model = surrogate.Fit(features, session.targets(), iteration, session.trace().times.gp);
    std::optional<FeatureRegion> region;
    if (cfg.sir_feature_margin >= 0.0) {
      region = FeatureRegion::Around(features, session.targets(), cfg.sir_feature_margin);
    }
    ProposeAndEvaluate(
        session, model, iteration, decomp.d_eff(),
        [&](const Eigen::MatrixXd& points) { return sdr::ProjectRows(decomp, session.ToUnitRows(points)); }, region);
  }
  session.trace().final_directions = decomp.directions;
  return std::move(session.trace());
}

RegretTrace RunKisirBo(const bench::Problem& problem, const RunConfig& cfg) {
  Session session(problem, cfg);
  if (cfg.init_n < cfg.target_dim + 1) throw std::invalid_argument("RunKisirBo: init_n must be at least d + 1");
  session.InitialDesign();
  SurrogateFitter surrogate(cfg.hyper_refresh_every);

  const double lengthscale = cfg.input_lengthscale * std::sqrt(static_cast<double>(problem.dim));
  kisir::GramState gram;
  {
    StageTimer timer(session.trace().times.gram);
    gram = kisir::GramState::Build(session.unit_inputs(), gp::KernelConfig::SquaredExponential(lengthscale, 1.0));
  }

  for (int iteration = 0; !session.done(); ++iteration) {
    kisir::KisirDecomposition decomp;
    {
      StageTimer timer(session.trace().times.subspace);
      decomp = kisir::KisirDirections(gram, session.targets(), cfg.target_dim);
    }
    if (decomp.d_eff() == 0) {
      session.Fallback();
    } else {
      const gp::GpModel model =
          surrogate.Fit(decomp.train_features, session.targets(), iteration, session.trace().times.gp);
      ProposeAndEvaluate(session, model, iteration, decomp.d_eff(), [&](const Eigen::MatrixXd& points) {
        return kisir::KisirProjectRows(decomp, gram, session.ToUnitRows(points));
      });
    }
    StageTimer timer(session.trace().times.gram);
    gram = std::move(gram).Append(session.unit_inputs().row(session.size() - 1).transpose());
  }
  session.trace().final_anchor_count = gram.size();
  return std::move(session.trace());
}

RegretTrace RunBaseline(const bench::Problem& problem, const RunConfig& cfg) {
  if (cfg.method != Method::kRandom && cfg.method != Method::kFullGpUcb) {
    throw std::invalid_argument("RunBaseline: method must be random or full-gp-ucb");
  }
  if (cfg.method == Method::kFullGpUcb && problem.dim > kFullGpMaxDim) {
    std::ostringstream os;
    os << "full-gp-ucb supports at most " << kFullGpMaxDim << " dimensions (got " << problem.dim
       << "); use sir-bo or kisir-bo";
    throw std::invalid_argument(os.str());
  }
  Session session(problem, cfg);
  session.InitialDesign();
  if (cfg.method == Method::kRandom) {
    while (!session.done()) session.Evaluate(session.UniformPoint());
    return std::move(session.trace());
  }

  SurrogateFitter surrogate(cfg.hyper_refresh_every);
  for (int iteration = 0; !session.done(); ++iteration) {
    const Eigen::MatrixXd features = session.unit_inputs();
    const gp::GpModel model = surrogate.Fit(features, session.targets(), iteration, session.trace().times.gp);
    ProposeAndEvaluate(session, model, iteration, problem.dim,
                       [&](const Eigen::MatrixXd& points) { return session.ToUnitRows(points); });
  }
  return std::move(session.trace());
}

RegretTrace Run(const bench::Problem& problem, const RunConfig& cfg) {
  switch (cfg.method) {
    case Method::kSirBo:
      return RunSirBo(problem, cfg);
    case Method::kKisirBo:
      return RunKisirBo(problem, cfg);
    case Method::kRandom:
    case Method::kFullGpUcb:
      break;
  }
  return RunBaseline(problem, cfg);
}

}  // namespace hdbo::driver
