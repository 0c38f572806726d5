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

#include <algorithm>
#include <cmath>

#include "optbench/solvers/continuous.hpp"

namespace optbench {

/// Spread of one-shot samples: min(1, sqrt(ln(1 + budget) / d)).
inline double recentering_sigma(std::int64_t budget, std::size_t d) {
  return std::min(1.0, std::sqrt(std::log1p(static_cast<double>(budget)) / static_cast<double>(d)));
}

/// One-shot design for extreme parallelism: every ask is an independent
/// Gaussian sample around the center, shrunk towards it when the budget is
/// small relative to the dimension. No adaptation; recommends the best told.
class OneShotRecentering final : public ContinuousOptimizer {
 public:
  explicit OneShotRecentering(SolverSetup setup)
      : ContinuousOptimizer(std::move(setup)),
        sigma_(recentering_sigma(budget(), static_cast<std::size_t>(dim()))),
        origin_(start_internal()) {}

  [[nodiscard]] double sigma() const noexcept { return sigma_; }

 protected:
  Vector next() override { return origin_ + sigma_ * standard_normal(rng(), dim()); }
  void update(CandidateId, const Vector&, double, bool) override {}

 private:
  double sigma_;
  Vector origin_;
};

}  // namespace optbench
