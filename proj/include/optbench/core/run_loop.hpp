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
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "optbench/core/optimizer.hpp"

namespace optbench {

struct HistoryEntry {
  std::int64_t eval_index = 0;  // 1-based
  double loss = 0.0;

  bool operator==(const HistoryEntry&) const = default;
};

struct RunResult {
  Recommendation recommendation;
  std::vector<HistoryEntry> history;
};

/// Raised when the objective fails mid-run; carries what was evaluated so far.
class RunAborted : public EvaluationError {
 public:
  RunAborted(const std::string& what, std::vector<HistoryEntry> partial)
      : EvaluationError(what), history(std::move(partial)) {}

  std::vector<HistoryEntry> history;
};

/// Called after each tell with the number of evaluations done so far.
using TellObserver = std::function<void(const Optimizer&, std::int64_t evaluations)>;

/// Drives `optimizer` on `function` for exactly its budget: asks are issued in
/// waves of min(num_workers, remaining) and every wave is fully told before the
/// next one starts.
inline RunResult run_loop(Optimizer& optimizer, Evaluable& function,
                          const TellObserver& on_tell = {}) {
  const std::int64_t budget = optimizer.budget();
  const std::int64_t workers = optimizer.context().num_workers;
  std::vector<HistoryEntry> history;
  history.reserve(static_cast<std::size_t>(budget));

  std::int64_t done = 0;
  std::vector<Candidate> wave;
  while (done < budget) {
    const std::int64_t size = std::min(workers, budget - done);
    wave.clear();
    for (std::int64_t i = 0; i < size; ++i) wave.push_back(optimizer.ask());
    for (const auto& candidate : wave) {
      double loss = 0.0;
      try {
        loss = function.evaluate(candidate.point);
      } catch (const std::exception& e) {
        throw RunAborted(std::string("evaluation failed: ") + e.what(), std::move(history));
      }
      if (!std::isfinite(loss)) {
        throw RunAborted("objective returned a non-finite loss", std::move(history));
      }
      optimizer.tell(candidate, loss);
      ++done;
      history.push_back(HistoryEntry{done, loss});
      if (on_tell) on_tell(optimizer, done);
    }
  }
  return RunResult{optimizer.recommend(), std::move(history)};
}

/// Adapts a callable to Evaluable; the callable is treated as noise-free.
template <class F>
class FunctionObjective final : public Evaluable {
 public:
  FunctionObjective(DomainSpec domain, F f, std::optional<double> minimum = std::nullopt)
      : domain_(std::move(domain)), f_(std::move(f)), minimum_(minimum) {}

  [[nodiscard]] const DomainSpec& domain() const override { return domain_; }
  double evaluate(std::span<const double> x) override { return f_(x); }
  double noise_free(std::span<const double> x) override { return f_(x); }
  [[nodiscard]] std::optional<double> known_minimum() const override { return minimum_; }

 private:
  DomainSpec domain_;
  F f_;
  std::optional<double> minimum_;
};

template <class F>
FunctionObjective(DomainSpec, F) -> FunctionObjective<F>;
template <class F>
FunctionObjective(DomainSpec, F, std::optional<double>) -> FunctionObjective<F>;

}  // namespace optbench
