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

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>

#include "optbench/core/optimizer.hpp"

namespace optbench {

/// Builds the `index`-th child of a composite optimizer for `context`,
/// starting from `start` when given.
using ChildFactory =
    std::function<std::unique_ptr<Optimizer>(std::size_t index, RunContext context, std::optional<Point> start)>;

/// Ownership of a child optimizer plus the id mapping between the wrapper's
/// candidates and the child's.
class ChildLink {
 public:
  struct Asked {
    Candidate candidate;
    /// Set when the child asked for another observation of a candidate that
    /// is already mapped to a wrapper candidate.
    std::optional<CandidateId> parent;
  };

  ChildLink() = default;
  explicit ChildLink(std::unique_ptr<Optimizer> child) : child_(std::move(child)) {}

  [[nodiscard]] bool valid() const noexcept { return static_cast<bool>(child_); }
  [[nodiscard]] Optimizer& get() noexcept { return *child_; }
  [[nodiscard]] const Optimizer& get() const noexcept { return *child_; }

  Asked ask() {
    Candidate c = child_->ask();
    std::optional<CandidateId> parent;
    if (auto it = to_parent_.find(c.id); it != to_parent_.end()) parent = it->second;
    return Asked{std::move(c), parent};
  }

  void bind(CandidateId parent, CandidateId child) {
    to_child_[parent] = child;
    to_parent_[child] = parent;
  }

  [[nodiscard]] bool owns(CandidateId parent) const { return to_child_.contains(parent); }

  /// Tells the child about a wrapper candidate; false when it is not mapped.
  bool forward(CandidateId parent, double loss) {
    auto it = to_child_.find(parent);
    if (it == to_child_.end()) return false;
    child_->tell(Candidate{it->second, {}, {}}, loss);
    return true;
  }

  [[nodiscard]] std::optional<CandidateId> child_of(CandidateId parent) const {
    auto it = to_child_.find(parent);
    if (it == to_child_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::optional<CandidateId> parent_of(CandidateId child) const {
    auto it = to_parent_.find(child);
    if (it == to_parent_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unique_ptr<Optimizer> child_;
  std::unordered_map<CandidateId, CandidateId> to_child_;
  std::unordered_map<CandidateId, CandidateId> to_parent_;
};

}  // namespace optbench
