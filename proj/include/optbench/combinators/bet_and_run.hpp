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
#include <optional>
#include <unordered_map>
#include <vector>

#include "optbench/core/delegate.hpp"

namespace optbench {

/// Phase-1 budgets: floor(budget * fraction) split equally, remainder to
/// child 0.
inline std::vector<std::int64_t> bet_and_run_shares(std::int64_t budget, std::size_t children, double fraction) {
  const auto phase = static_cast<std::int64_t>(std::floor(static_cast<double>(budget) * fraction + 1e-9));
  const auto n = static_cast<std::int64_t>(children);
  const std::int64_t each = phase / n;
  if (each == 0) throw ConfigError("bet_and_run phase 1 leaves a child without evaluations");
  std::vector<std::int64_t> shares(children, each);
  shares[0] += phase - each * n;
  return shares;
}

/// Index of the smallest loss, lowest index on ties.
inline std::size_t bet_and_run_survivor(const std::vector<double>& best_losses) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < best_losses.size(); ++i) {
    if (best_losses[i] < best_losses[best]) best = i;
  }
  return best;
}

/// Runs all children round-robin during phase 1, then keeps only the one
/// with the best told loss for the remaining budget.
class BetAndRun final : public Optimizer {
 public:
  BetAndRun(SolverSetup setup, std::size_t children, double phase_fraction, const ChildFactory& factory)
      : Optimizer(std::move(setup)) {
    if (children < 2) throw ConfigError("bet_and_run needs at least two children");
    shares_ = bet_and_run_shares(budget(), children, phase_fraction);
    for (auto s : shares_) phase_budget_ += s;
    used_.assign(children, 0);
    for (std::size_t i = 0; i < children; ++i) {
      RunContext ctx = context();
      ctx.budget = shares_[i] + (budget() - phase_budget_);
      ctx.num_workers = std::min(ctx.num_workers, ctx.budget);
      links_.emplace_back(factory(i, ctx, start()));
    }
  }

  [[nodiscard]] const std::vector<std::int64_t>& shares() const noexcept { return shares_; }
  [[nodiscard]] std::int64_t phase_budget() const noexcept { return phase_budget_; }
  [[nodiscard]] std::optional<std::size_t> survivor() const noexcept { return survivor_; }
  [[nodiscard]] const Optimizer& child(std::size_t i) const { return links_.at(i).get(); }

 protected:
  Proposal propose() override {
    std::size_t k = 0;
    if (num_asks() < phase_budget_) {
      while (used_[cursor_ % links_.size()] >= shares_[cursor_ % links_.size()]) ++cursor_;
      k = cursor_++ % links_.size();
      ++used_[k];
    } else {
      if (!survivor_) {
        std::vector<double> best;
        for (const auto& link : links_) {
          const Candidate* inc = link.get().incumbent();
          best.push_back(inc ? inc->mean_loss() : std::numeric_limits<double>::infinity());
        }
        survivor_ = bet_and_run_survivor(best);
      }
      k = *survivor_;
    }
    auto asked = links_[k].ask();
    if (asked.parent) return Proposal::again(*asked.parent);
    links_[k].bind(upcoming_id(), asked.candidate.id);
    owner_[upcoming_id()] = k;
    return Proposal::fresh(std::move(asked.candidate.point));
  }

  void observe(const Candidate& candidate, double loss) override {
    if (auto it = owner_.find(candidate.id); it != owner_.end()) {
      links_[it->second].forward(candidate.id, loss);
      return;
    }
    if (survivor_) {
      links_[*survivor_].get().inform(candidate.point, loss);
    } else {
      for (auto& link : links_) link.get().inform(candidate.point, loss);
    }
  }

  [[nodiscard]] std::optional<Point> estimate() const override {
    if (!survivor_) return std::nullopt;
    const Optimizer& c = links_[*survivor_].get();
    if (c.num_tells() == 0 || c.incumbent()->mean_loss() > incumbent()->mean_loss()) return std::nullopt;
    return c.recommend().point;
  }

 private:
  std::vector<ChildLink> links_;
  std::vector<std::int64_t> shares_;
  std::vector<std::int64_t> used_;
  std::int64_t phase_budget_ = 0;
  std::size_t cursor_ = 0;
  std::optional<std::size_t> survivor_;
  std::unordered_map<CandidateId, std::size_t> owner_;
};

}  // namespace optbench
