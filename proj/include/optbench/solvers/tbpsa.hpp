// Copyright 2026 The optbench Authors.
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

#pragma once

// Test-based population-size adaptation (TBPSA).
//
// A (mu/mu, lambda) evolution strategy with self-adapted step sizes. The
// center is the mean of the elite; the population doubles whenever the mean
// elite loss fails to improve for `stagnation_limit` consecutive
// generations, which averages noise out as the run proceeds. The
// recommendation is the mean of the last `window` centers. The naive variant
// recommends the best single observation instead.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "optbench/solvers/continuous.hpp"

namespace optbench {

struct TbpsaOptions {
  double elite_fraction = 0.25;
  std::size_t window = 5;
  int stagnation_limit = 2;
  bool naive = false;
};

struct TbpsaSample {
  Vector point;
  double sigma = 1.0;
  double loss = 0.0;
};

struct TbpsaState {
  Vector center;
  double sigma = 1.0;
  std::size_t lambda = 4;
  std::size_t max_lambda = std::numeric_limits<std::size_t>::max();
  std::deque<Vector> centers;
  double best_elite_mean = std::numeric_limits<double>::infinity();
  int stagnation = 0;

  [[nodiscard]] std::size_t elite_size(double fraction) const {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(lambda) * fraction - 1e-12)));
  }
};

/// One generation: select the elite, move the center to its mean, record the
/// center, self-adapt sigma and grow the population on stagnation.
inline void tbpsa_update(TbpsaState& state, const TbpsaOptions& options,
                         std::vector<TbpsaSample> generation) {
  std::stable_sort(generation.begin(), generation.end(),
                   [](const TbpsaSample& a, const TbpsaSample& b) { return a.loss < b.loss; });
  const std::size_t mu = std::min(state.elite_size(options.elite_fraction), generation.size());
  Vector center = Vector::Zero(generation.front().point.size());
  double log_sigma = 0.0;
  double elite_mean = 0.0;
  for (std::size_t i = 0; i < mu; ++i) {
    center += generation[i].point;
    log_sigma += std::log(generation[i].sigma);
    elite_mean += generation[i].loss;
  }
  const double m = static_cast<double>(mu);
  state.center = center / m;
  state.sigma = std::max(std::exp(log_sigma / m), 1e-300);
  elite_mean /= m;

  state.centers.push_back(state.center);
  while (state.centers.size() > options.window) state.centers.pop_front();

  if (elite_mean < state.best_elite_mean) {
    state.best_elite_mean = elite_mean;
    state.stagnation = 0;
  } else if (++state.stagnation >= options.stagnation_limit) {
    state.lambda = std::min(state.lambda * 2, std::max(state.lambda, state.max_lambda));
    state.stagnation = 0;
  }
}

class Tbpsa final : public ContinuousOptimizer {
 public:
  Tbpsa(SolverSetup setup, TbpsaOptions options) : ContinuousOptimizer(std::move(setup)), options_(options) {
    const auto n = static_cast<std::size_t>(dim());
    state_.center = start_internal();
    state_.lambda = std::max<std::size_t>({4, 4 * n, static_cast<std::size_t>(context().num_workers)});
    state_.max_lambda = std::max<std::size_t>(state_.lambda, static_cast<std::size_t>(budget() / 10));
    tau_ = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  }

  [[nodiscard]] const TbpsaState& state() const noexcept { return state_; }

 protected:
  Vector next() override {
    std::normal_distribution<double> normal;
    const double sigma = state_.sigma * std::exp(tau_ * normal(rng()));
    sigma_of_[upcoming_id()] = sigma;
    return state_.center + sigma * standard_normal(rng(), dim());
  }

  void update(CandidateId id, const Vector& u, double loss, bool asked) override {
    if (loss < best_loss_) {
      best_loss_ = loss;
      best_point_ = u;
    }
    if (!asked) return;
    auto it = sigma_of_.find(id);
    if (it == sigma_of_.end()) return;
    generation_.push_back(TbpsaSample{u, it->second, loss});
    sigma_of_.erase(it);
    if (generation_.size() >= state_.lambda) {
      tbpsa_update(state_, options_, std::move(generation_));
      generation_.clear();
    }
  }

  [[nodiscard]] std::optional<Vector> estimate_internal() const override {
    if (options_.naive) {
      if (best_point_.size() == 0) return std::nullopt;
      return best_point_;
    }
    if (state_.centers.empty()) return std::nullopt;
    Vector mean = Vector::Zero(dim());
    for (const auto& c : state_.centers) mean += c;
    return Vector(mean / static_cast<double>(state_.centers.size()));
  }

 private:
  TbpsaOptions options_;
  TbpsaState state_;
  double tau_ = 1.0;
  std::unordered_map<CandidateId, double> sigma_of_;
  std::vector<TbpsaSample> generation_;
  Vector best_point_;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

}  // namespace optbench
