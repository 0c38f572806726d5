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
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "optbench/core/delegate.hpp"

namespace optbench {

/// Sub-budgets of a chain. Children with an absolute ask count take it first
/// (capped by what is left); the others split the rest by their renormalized
/// fractions, floored, with the remainder going to the last of them. With no
/// fractional child the remainder goes to the last child.
inline std::vector<std::int64_t> chain_budgets(std::int64_t budget, std::span<const double> fractions,
                                               std::span<const std::optional<std::int64_t>> absolute = {}) {
  const std::size_t n = fractions.size();
  std::vector<std::int64_t> out(n, 0);
  auto fixed = [&](std::size_t i) { return i < absolute.size() && absolute[i].has_value(); };
  std::int64_t left = budget;
  double share = 0.0;
  std::optional<std::size_t> last_fractional;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed(i)) {
      out[i] = std::clamp<std::int64_t>(*absolute[i], 0, left);
      left -= out[i];
    } else {
      share += fractions[i];
      last_fractional = i;
    }
  }
  if (!last_fractional) {
    if (n > 0) out[n - 1] += left;
    return out;
  }
  std::int64_t given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed(i)) continue;
    out[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(left) * fractions[i] / share + 1e-9));
    given += out[i];
  }
  out[*last_fractional] += left - given;
  return out;
}

/// Runs children one after another. Each child is built when its
/// predecessor has used its sub-budget and starts from the best point told
/// so far. Budget left by a child that stops early rolls over to the next.
class Chain final : public Optimizer {
 public:
  Chain(SolverSetup setup, std::vector<std::int64_t> budgets, ChildFactory factory)
      : Optimizer(std::move(setup)), budgets_(std::move(budgets)), factory_(std::move(factory)) {
    std::int64_t total = 0;
    for (auto b : budgets_) {
      if (b < 0) throw ConfigError("negative chain sub-budget");
      total += b;
    }
    if (total != budget()) throw ConfigError("chain sub-budgets must add up to the budget");
  }

  [[nodiscard]] const std::vector<std::int64_t>& budgets() const noexcept { return budgets_; }
  [[nodiscard]] std::size_t children_started() const noexcept { return links_.size(); }
  [[nodiscard]] const Optimizer& child(std::size_t k) const { return links_.at(k).get(); }
  /// Index in the chain of the k-th started child.
  [[nodiscard]] std::size_t child_index(std::size_t k) const { return indices_.at(k); }
  /// Starting point handed to the k-th started child.
  [[nodiscard]] const std::optional<Point>& child_start(std::size_t k) const { return starts_.at(k); }

 protected:
  Proposal propose() override {
    for (;;) {
      if (!links_.empty()) {
        ChildLink& link = links_.back();
        const Optimizer& c = link.get();
        const bool last = next_ >= budgets_.size();
        if (c.num_asks() < c.budget() && (last || !c.exhausted())) {
          auto asked = link.ask();
          if (asked.parent) return Proposal::again(*asked.parent);
          link.bind(upcoming_id(), asked.candidate.id);
          owner_[upcoming_id()] = links_.size() - 1;
          return Proposal::fresh(std::move(asked.candidate.point));
        }
        carry_ += c.budget() - c.num_asks();
      }
      start_next();
    }
  }

  void observe(const Candidate& candidate, double loss) override {
    if (auto it = owner_.find(candidate.id); it != owner_.end()) {
      links_[it->second].forward(candidate.id, loss);
      return;
    }
    if (!links_.empty()) links_.back().get().inform(candidate.point, loss);
  }

  [[nodiscard]] std::optional<Point> estimate() const override {
    if (links_.empty()) return std::nullopt;
    const Optimizer& c = links_.back().get();
    if (c.num_tells() == 0) return std::nullopt;
    if (c.incumbent()->mean_loss() > incumbent()->mean_loss()) return std::nullopt;
    return c.recommend().point;
  }

 private:
  void start_next() {
    while (next_ < budgets_.size() && budgets_[next_] + carry_ == 0) ++next_;
    if (next_ >= budgets_.size()) throw ContractError("chain has no child left to ask");
    const std::int64_t b = budgets_[next_] + carry_;
    carry_ = 0;
    RunContext ctx = context();
    ctx.budget = b;
    ctx.num_workers = std::min(ctx.num_workers, b);
    std::optional<Point> from = incumbent() ? std::optional<Point>(incumbent()->point) : start();
    links_.emplace_back(factory_(next_, ctx, from));
    indices_.push_back(next_);
    starts_.push_back(std::move(from));
    ++next_;
  }

  std::vector<std::int64_t> budgets_;
  ChildFactory factory_;
  std::vector<ChildLink> links_;
  std::vector<std::size_t> indices_;
  std::vector<std::optional<Point>> starts_;
  std::unordered_map<CandidateId, std::size_t> owner_;
  std::size_t next_ = 0;
  std::int64_t carry_ = 0;
};

}  // namespace optbench
