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
#include <memory>
#include <unordered_set>
#include <vector>

#include "optbench/core/delegate.hpp"
#include "optbench/solvers/continuous.hpp"
#include "optbench/solvers/quadratic_model.hpp"

namespace optbench {

/// Interleaves quadratic meta-model proposals with a continuous child.
///
/// Every max(2, num_workers)-th ask, the archive is fitted with a quadratic
/// and its minimizer is evaluated instead of a child sample. The child learns
/// about those points through inform(). Without a usable model the ask falls
/// through to the child.
class MetamodelWrapper final : public Optimizer {
 public:
  MetamodelWrapper(SolverSetup setup, std::unique_ptr<Optimizer> child)
      : Optimizer(std::move(setup)), child_(std::move(child)) {
    if (!domain().all_continuous()) throw ConfigError("metamodel wrapper needs a continuous domain");
    period_ = std::max<std::int64_t>(2, context().num_workers);
  }

  [[nodiscard]] const Optimizer& child() const noexcept { return child_.get(); }
  [[nodiscard]] std::int64_t model_proposals() const noexcept { return model_asks_; }

 protected:
  Proposal propose() override {
    if (num_asks() % period_ == period_ - 1) {
      if (auto x = metamodel_propose(points_, values_)) {
        Point p = project(*x);
        if (p != last_model_point_) {
          last_model_point_ = p;
          model_ids_.insert(upcoming_id());
          ++model_asks_;
          return Proposal::fresh(std::move(p));
        }
      }
    }
    auto asked = child_.ask();
    if (asked.parent) return Proposal::again(*asked.parent);
    child_.bind(upcoming_id(), asked.candidate.id);
    return Proposal::fresh(std::move(asked.candidate.point));
  }

  void observe(const Candidate& candidate, double loss) override {
    Vector x = Eigen::Map<const Vector>(candidate.point.data(), static_cast<Eigen::Index>(candidate.point.size()));
    points_.push_back(std::move(x));
    values_.push_back(loss);
    if (model_ids_.erase(candidate.id) > 0 || informed(candidate.id)) {
      child_.get().inform(candidate.point, loss);
      return;
    }
    child_.forward(candidate.id, loss);
  }

 private:
  [[nodiscard]] Point project(const Vector& x) const {
    Point p(static_cast<std::size_t>(x.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& c = std::get<Continuous>(domain().kind(i));
      double v = x[static_cast<Eigen::Index>(i)];
      if (c.lower) v = std::max(v, *c.lower);
      if (c.upper) v = std::min(v, *c.upper);
      p[i] = v;
    }
    return p;
  }

  ChildLink child_;
  std::int64_t period_ = 2;
  std::int64_t model_asks_ = 0;
  std::vector<Vector> points_;
  std::vector<double> values_;
  std::unordered_set<CandidateId> model_ids_;
  Point last_model_point_;
};

}  // namespace optbench
