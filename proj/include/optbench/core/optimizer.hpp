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

// The ask/tell/recommend contract shared by every solver.
//
// Optimizer owns the bookkeeping common to all solvers (budget, pending
// asks, archive of told candidates, incumbent) and delegates the actual
// search to three hooks: propose(), observe() and estimate().

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "optbench/core/domain.hpp"
#include "optbench/core/errors.hpp"
#include "optbench/core/seed.hpp"

namespace optbench {

using CandidateId = std::uint64_t;

struct RunContext {
  DomainSpec domain;
  std::int64_t budget = 1;
  std::int64_t num_workers = 1;
  bool noisy = false;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (domain.size() == 0) throw ConfigError("run context has an empty domain");
    if (budget <= 0) throw ConfigError("budget must be positive");
    if (num_workers < 1) throw ConfigError("num_workers must be >= 1");
    if (num_workers > budget) throw ConfigError("num_workers must not exceed the budget");
  }
};

struct Candidate {
  CandidateId id = 0;
  Point point;
  std::vector<double> observations;

  [[nodiscard]] double mean_loss() const noexcept {
    if (observations.empty()) return std::numeric_limits<double>::infinity();
    return std::accumulate(observations.begin(), observations.end(), 0.0) /
           static_cast<double>(observations.size());
  }
};

/// Result of recommend(). `id` is set when the point is a told candidate;
/// `center_fallback` flags the no-tells-yet degenerate case.
struct Recommendation {
  Point point;
  std::optional<CandidateId> id;
  bool center_fallback = false;
};

/// What a solver wants evaluated next: a fresh point, or another observation
/// of an already told candidate.
struct Proposal {
  Point point;
  std::optional<CandidateId> resample;

  static Proposal fresh(Point p) { return Proposal{std::move(p), std::nullopt}; }
  static Proposal again(CandidateId id) { return Proposal{{}, id}; }
};

/// Everything a solver needs at construction time.
struct SolverSetup {
  RunContext context;
  std::uint64_t seed = 0;
  /// Starting point (chaining handoff); the domain center when absent.
  std::optional<Point> start;
};

class Optimizer {
 public:
  explicit Optimizer(SolverSetup setup)
      : context_(std::move(setup.context)), start_(std::move(setup.start)), rng_(setup.seed) {
    context_.validate();
    if (start_ && !context_.domain.contains(*start_)) {
      throw ContractError("start point does not belong to the domain");
    }
  }

  Optimizer(const Optimizer&) = delete;
  Optimizer& operator=(const Optimizer&) = delete;
  virtual ~Optimizer() = default;

  Candidate ask() {
    if (asks_ >= context_.budget) {
      throw BudgetExceeded("budget of " + std::to_string(context_.budget) + " asks exhausted");
    }
    Proposal proposal = propose();
    CandidateId id = 0;
    if (proposal.resample) {
      id = *proposal.resample;
      if (id >= archive_.size() || archive_[id].observations.empty()) {
        throw ContractError("solver requested a resample of an untold candidate");
      }
    } else {
      if (!context_.domain.contains(proposal.point)) {
        throw ContractError("solver proposed a point outside the domain");
      }
      id = archive_.size();
      archive_.push_back(Candidate{id, std::move(proposal.point), {}});
    }
    ++asks_;
    ++pending_[id];
    return Candidate{id, archive_[id].point, {}};
  }

  void tell(const Candidate& candidate, double loss) {
    if (!std::isfinite(loss)) throw InvalidLoss("loss must be finite");
    const CandidateId id = candidate.id;
    if (id >= archive_.size()) {
      throw ContractError("tell for unknown candidate id " + std::to_string(id));
    }
    auto it = pending_.find(id);
    if (it != pending_.end()) {
      if (--it->second == 0) pending_.erase(it);
    } else if (archive_[id].observations.empty()) {
      throw ContractError("tell for candidate " + std::to_string(id) + " that was never asked");
    }
    record(id, loss);
  }

  /// Tells a point that was not produced by ask() ("tell not asked").
  /// It joins the archive and the solver sees it through observe().
  CandidateId inform(const Point& point, double loss) {
    if (!std::isfinite(loss)) throw InvalidLoss("loss must be finite");
    if (!context_.domain.contains(point)) throw ContractError("informed point outside the domain");
    const CandidateId id = archive_.size();
    archive_.push_back(Candidate{id, point, {}});
    informed_.resize(archive_.size(), false);
    informed_[id] = true;
    record(id, loss);
    return id;
  }

  [[nodiscard]] Recommendation recommend() const {
    if (tells_ == 0) return Recommendation{context_.domain.center(), std::nullopt, true};
    if (auto point = estimate()) return Recommendation{std::move(*point), std::nullopt, false};
    const Candidate& best = archive_[*incumbent_];
    return Recommendation{best.point, best.id, false};
  }

  [[nodiscard]] const RunContext& context() const noexcept { return context_; }
  [[nodiscard]] const DomainSpec& domain() const noexcept { return context_.domain; }
  [[nodiscard]] std::int64_t budget() const noexcept { return context_.budget; }
  [[nodiscard]] std::int64_t num_asks() const noexcept { return asks_; }
  [[nodiscard]] std::int64_t num_tells() const noexcept { return tells_; }
  [[nodiscard]] std::size_t num_pending() const noexcept {
    std::size_t n = 0;
    for (const auto& [id, count] : pending_) n += count;
    return n;
  }
  [[nodiscard]] bool is_pending(CandidateId id) const { return pending_.contains(id); }

  [[nodiscard]] const Candidate* incumbent() const noexcept {
    return incumbent_ ? &archive_[*incumbent_] : nullptr;
  }
  [[nodiscard]] const Candidate& candidate(CandidateId id) const { return archive_.at(id); }
  [[nodiscard]] std::size_t archive_size() const noexcept { return archive_.size(); }

  /// True once the solver has nothing more to propose (one-shot designs).
  [[nodiscard]] virtual bool exhausted() const { return false; }

 protected:
  virtual Proposal propose() = 0;
  /// `candidate` already contains the new observation.
  virtual void observe(const Candidate& candidate, double loss) = 0;
  /// Solver-specific recommendation; the incumbent is used when empty.
  [[nodiscard]] virtual std::optional<Point> estimate() const { return std::nullopt; }

  Rng& rng() noexcept { return rng_; }
  [[nodiscard]] bool noisy() const noexcept { return context_.noisy; }
  [[nodiscard]] const std::optional<Point>& start() const noexcept { return start_; }
  [[nodiscard]] Point start_point() const { return start_ ? *start_ : context_.domain.center(); }
  /// Id that the next fresh proposal returned by propose() will receive.
  [[nodiscard]] CandidateId upcoming_id() const noexcept { return archive_.size(); }
  /// True for candidates that entered through inform() rather than ask().
  [[nodiscard]] bool informed(CandidateId id) const noexcept {
    return id < informed_.size() && informed_[id];
  }

 private:
  void record(CandidateId id, double loss) {
    archive_[id].observations.push_back(loss);
    ++tells_;
    update_incumbent(id);
    observe(archive_[id], loss);
  }

  // Noise-free: strict improvement of the mean replaces the incumbent.
  // Noisy: lowest mean, ties broken by more observations then lower id.
  [[nodiscard]] bool better(const Candidate& a, const Candidate& b) const noexcept {
    const double ma = a.mean_loss();
    const double mb = b.mean_loss();
    if (ma != mb) return ma < mb;
    if (!context_.noisy) return false;
    if (a.observations.size() != b.observations.size()) {
      return a.observations.size() > b.observations.size();
    }
    return a.id < b.id;
  }

  void update_incumbent(CandidateId id) {
    if (!incumbent_) {
      incumbent_ = id;
      return;
    }
    if (*incumbent_ == id) {
      if (context_.noisy) rescan();
      return;
    }
    if (better(archive_[id], archive_[*incumbent_])) incumbent_ = id;
  }

  void rescan() {
    for (const auto& c : archive_) {
      if (c.observations.empty()) continue;
      if (better(c, archive_[*incumbent_])) incumbent_ = c.id;
    }
  }

  RunContext context_;
  std::optional<Point> start_;
  Rng rng_;
  std::vector<Candidate> archive_;
  std::vector<bool> informed_;
  std::unordered_map<CandidateId, int> pending_;
  std::optional<CandidateId> incumbent_;
  std::int64_t asks_ = 0;
  std::int64_t tells_ = 0;
};

/// An objective: noisy evaluation plus the noise-free value used for scoring.
class Evaluable {
 public:
  virtual ~Evaluable() = default;
  [[nodiscard]] virtual const DomainSpec& domain() const = 0;
  virtual double evaluate(std::span<const double> x) = 0;
  virtual double noise_free(std::span<const double> x) = 0;
  /// Minimum of the noise-free function when known analytically.
  [[nodiscard]] virtual std::optional<double> known_minimum() const { return std::nullopt; }
  [[nodiscard]] virtual bool noisy() const { return false; }
};

}  // namespace optbench
