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
#include <unordered_map>
#include <vector>

#include "optbench/core/delegate.hpp"

namespace optbench {

/// Number of optimized coordinates after t asks:
/// min(d, 1 + floor(t / ceil(0.8 * budget / d))).
inline std::size_t progressive_active(std::int64_t t, std::size_t d, std::int64_t budget) {
  if (d <= 1) return 1;
  const auto step = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(0.8 * static_cast<double>(budget) / static_cast<double>(d))));
  return std::min<std::size_t>(d, 1 + static_cast<std::size_t>(t / step));
}

/// Optimizes the leading coordinates first and widens the active set over
/// time. Inactive coordinates stay at the domain center. On each widening a
/// fresh child is built on the larger subspace, started from the best point
/// told so far.
class ProgressiveWidening final : public Optimizer {
 public:
  ProgressiveWidening(SolverSetup setup, ChildFactory factory)
      : Optimizer(std::move(setup)), factory_(std::move(factory)), center_(domain().center()) {
    if (!domain().all_continuous()) throw ConfigError("progressive widening needs a continuous domain");
  }

  [[nodiscard]] std::size_t active() const noexcept { return active_; }
  [[nodiscard]] std::size_t generations() const noexcept { return links_.size(); }

 protected:
  Proposal propose() override {
    const std::size_t want = progressive_active(num_asks(), domain().size(), budget());
    if (links_.empty() || want != active_) rebuild(want);
    ChildLink& link = links_.back();
    auto asked = link.ask();
    if (asked.parent) return Proposal::again(*asked.parent);
    link.bind(upcoming_id(), asked.candidate.id);
    owner_[upcoming_id()] = links_.size() - 1;
    return Proposal::fresh(expand(asked.candidate.point));
  }

  void observe(const Candidate& candidate, double loss) override {
    if (auto it = owner_.find(candidate.id); it != owner_.end()) {
      links_[it->second].forward(candidate.id, loss);
      return;
    }
    if (!links_.empty()) links_.back().get().inform(restrict(candidate.point), loss);
  }

  [[nodiscard]] std::optional<Point> estimate() const override {
    if (links_.empty()) return std::nullopt;
    const Optimizer& c = links_.back().get();
    if (c.num_tells() == 0 || c.incumbent()->mean_loss() > incumbent()->mean_loss()) return std::nullopt;
    return expand(c.recommend().point);
  }

 private:
  [[nodiscard]] Point expand(const Point& sub) const {
    Point full = center_;
    std::copy(sub.begin(), sub.end(), full.begin());
    return full;
  }

  [[nodiscard]] Point restrict(const Point& full) const {
    return Point(full.begin(), full.begin() + static_cast<long>(active_));
  }

  void rebuild(std::size_t active) {
    active_ = active;
    std::vector<VariableKind> kinds;
    for (std::size_t i = 0; i < active; ++i) kinds.push_back(domain().kind(i));
    RunContext ctx = context();
    ctx.domain = DomainSpec(std::move(kinds));
    ctx.budget = budget() - num_asks();
    ctx.num_workers = std::min(ctx.num_workers, ctx.budget);
    std::optional<Point> from;
    if (incumbent()) {
      from = restrict(incumbent()->point);
    } else if (start()) {
      from = restrict(*start());
    }
    links_.emplace_back(factory_(links_.size(), ctx, std::move(from)));
  }

  ChildFactory factory_;
  Point center_;
  std::size_t active_ = 0;
  std::vector<ChildLink> links_;
  std::unordered_map<CandidateId, std::size_t> owner_;
};

}  // namespace optbench
