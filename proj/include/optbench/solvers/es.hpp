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

#include <cmath>
#include <limits>

#include "optbench/solvers/continuous.hpp"

namespace optbench {

inline constexpr double kMinStepSize = 1e-15;

/// (1+1)-ES with the one-fifth success rule. With c_up = 2 and
/// c_down = 2^(-1/4), one success followed by four failures is neutral.
struct EsState {
  Vector incumbent;
  double incumbent_loss = std::numeric_limits<double>::infinity();
  double sigma = 1.0;
  double c_up = 2.0;
  double c_down = 0.8408964152537145;  // 2^(-1/4)
  int clamp_events = 0;
};

/// Applies one told offspring: strict improvement replaces the parent and
/// widens the step, anything else narrows it.
inline void es_one_plus_one_step(EsState& state, const Vector& point, double loss) {
  if (loss < state.incumbent_loss) {
    state.incumbent = point;
    state.incumbent_loss = loss;
    state.sigma *= state.c_up;
  } else {
    state.sigma *= state.c_down;
  }
  if (state.sigma < kMinStepSize) {
    state.sigma = kMinStepSize;
    ++state.clamp_events;
  }
}

class OnePlusOneEs final : public ContinuousOptimizer {
 public:
  explicit OnePlusOneEs(SolverSetup setup) : ContinuousOptimizer(std::move(setup)) {
    state_.incumbent = start_internal();
  }

  [[nodiscard]] const EsState& state() const noexcept { return state_; }

 protected:
  Vector next() override { return state_.incumbent + state_.sigma * standard_normal(rng(), dim()); }

  void update(CandidateId, const Vector& u, double loss, bool asked) override {
    if (asked) {
      es_one_plus_one_step(state_, u, loss);
    } else if (loss < state_.incumbent_loss) {
      state_.incumbent = u;
      state_.incumbent_loss = loss;
    }
  }

 private:
  EsState state_;
};

}  // namespace optbench
