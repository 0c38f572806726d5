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

// Mutation-based discrete solvers: (1+1) evolutionary algorithms with several
// mutation-rate schedules, and FastGA with heavy-tailed mutation strength.
// Both accept any domain with at least one mutable variable; continuous
// variables in a mixed domain take Gaussian steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <variant>
#include <vector>

#include "optbench/core/optimizer.hpp"

namespace optbench {

enum class DiscreteVariant { fixed, linear_decay, adaptive, portfolio, optimistic_noisy };

inline double linear_decay_rate(std::size_t n, std::int64_t t, std::int64_t budget) {
  const double floor = 1.0 / static_cast<double>(n);
  const double frac = 1.0 - static_cast<double>(t) / static_cast<double>(std::max<std::int64_t>(budget, 1));
  return std::max(floor, 0.5 * frac);
}

/// Success doubles the rate, failure shrinks it by 2^(-1/4); clamped to
/// [1/n, 1/2].
inline double adaptive_rate_update(double rate, bool success, std::size_t n) {
  const double lo = std::min(0.5, 1.0 / static_cast<double>(n));
  const double next = success ? 2.0 * rate : rate * std::pow(2.0, -0.25);
  return std::clamp(next, lo, 0.5);
}

inline std::array<double, 3> portfolio_rates(std::size_t n) {
  const double inv = 1.0 / static_cast<double>(n);
  return {inv, 0.5 * std::sqrt(inv), 0.5};
}

/// P(k) = k^-beta / Z over k = 1..max(1, floor(n/2)); entry k-1 holds P(k).
inline std::vector<double> fastga_strength_distribution(std::size_t n, double beta) {
  const std::size_t support = std::max<std::size_t>(1, n / 2);
  std::vector<double> p(support);
  double z = 0.0;
  for (std::size_t k = 1; k <= support; ++k) {
    p[k - 1] = std::pow(static_cast<double>(k), -beta);
    z += p[k - 1];
  }
  for (double& v : p) v /= z;
  return p;
}

/// A value different from `value` for one variable: uniform over the other
/// symbols of finite alphabets, a +-2^j step (j geometric) for unbounded
/// integers, a Gaussian step for continuous variables.
inline double mutate_value(const VariableKind& kind, double value, Rng& rng) {
  auto other_symbol = [&rng](std::int64_t lo, std::int64_t size, double v) {
    std::uniform_int_distribution<std::int64_t> pick(0, size - 2);
    std::int64_t s = pick(rng);
    if (s >= static_cast<std::int64_t>(v) - lo) ++s;
    return static_cast<double>(lo + s);
  };
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return other_symbol(v.low, v.high - v.low + 1, value);
        } else if constexpr (std::is_same_v<T, Categorical>) {
          return other_symbol(0, v.arity, value);
        } else if constexpr (std::is_same_v<T, UnboundedInteger>) {
          std::geometric_distribution<int> geo(0.5);
          const int j = std::min(geo(rng), 40);
          const double step = std::ldexp(1.0, j);
          return (rng() & 1U) ? value + step : value - step;
        } else {
          std::normal_distribution<double> normal;
          double x = value + v.scale * normal(rng);
          if (v.lower) x = std::max(x, *v.lower);
          if (v.upper) x = std::min(x, *v.upper);
          return x;
        }
      },
      kind);
}

/// Indices of variables that can take another value.
inline std::vector<std::size_t> mutable_variables(const DomainSpec& domain) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const auto& kind = domain.kind(i);
    if (is_continuous(kind) || alphabet_size(kind) >= 2) out.push_back(i);
  }
  if (out.empty()) throw ConfigError("no variable of the domain can be mutated");
  return out;
}

/// Mutates each mutable variable with probability `rate`; when none was
/// selected, one uniformly chosen variable is forced to change.
inline Point mutate_with_rate(const DomainSpec& domain, const std::vector<std::size_t>& vars, Point x,
                              double rate, Rng& rng) {
  std::bernoulli_distribution flip(std::clamp(rate, 0.0, 1.0));
  bool changed = false;
  for (std::size_t i : vars) {
    if (flip(rng)) {
      x[i] = mutate_value(domain.kind(i), x[i], rng);
      changed = true;
    }
  }
  if (!changed) {
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    const std::size_t i = vars[pick(rng)];
    x[i] = mutate_value(domain.kind(i), x[i], rng);
  }
  return x;
}

/// Mutates exactly min(k, |vars|) distinct variables.
inline Point mutate_exactly(const DomainSpec& domain, std::vector<std::size_t> vars, Point x, std::size_t k,
                            Rng& rng) {
  k = std::min(k, vars.size());
  for (std::size_t j = 0; j < k; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, vars.size() - 1);
    std::swap(vars[j], vars[pick(rng)]);
    x[vars[j]] = mutate_value(domain.kind(vars[j]), x[vars[j]], rng);
  }
  return x;
}

/// Shared (1+1) skeleton: the first ask evaluates the start point, later asks
/// mutate the incumbent. Parallel waves get independent mutants.
class MutationSearch : public Optimizer {
 public:
  explicit MutationSearch(SolverSetup setup)
      : Optimizer(std::move(setup)), vars_(mutable_variables(domain())), parent_(start_point()) {}

  [[nodiscard]] const Point& parent() const noexcept { return parent_; }
  [[nodiscard]] double parent_loss() const noexcept { return parent_loss_; }
  [[nodiscard]] std::size_t mutable_count() const noexcept { return vars_.size(); }

 protected:
  Proposal propose() override {
    if (!started_) {
      started_ = true;
      return Proposal::fresh(parent_);
    }
    return Proposal::fresh(mutate(parent_));
  }

  void observe(const Candidate& candidate, double loss) override {
    const bool success = loss <= parent_loss_;
    if (success) {
      parent_ = candidate.point;
      parent_loss_ = loss;
    }
    if (!informed(candidate.id) && candidate.id != 0) feedback(success);
  }

  virtual Point mutate(const Point& x) = 0;
  virtual void feedback(bool) {}

  const std::vector<std::size_t>& vars() const noexcept { return vars_; }

 private:
  std::vector<std::size_t> vars_;
  Point parent_;
  double parent_loss_ = std::numeric_limits<double>::infinity();
  bool started_ = false;
};

class DiscreteOnePlusOne final : public MutationSearch {
 public:
  DiscreteOnePlusOne(SolverSetup setup, DiscreteVariant variant)
      : MutationSearch(std::move(setup)), variant_(variant) {
    const double n = static_cast<double>(mutable_count());
    rate_ = variant_ == DiscreteVariant::linear_decay ? 0.5 : std::min(0.5, 1.0 / n);
  }

  [[nodiscard]] DiscreteVariant variant() const noexcept { return variant_; }
  /// Rate used for the most recent mutation (or the next, for fixed and
  /// adaptive schedules).
  [[nodiscard]] double rate() const noexcept { return rate_; }

 protected:
  Proposal propose() override {
    if (variant_ == DiscreteVariant::optimistic_noisy && chosen_) {
      std::bernoulli_distribution coin(0.5);
      if (coin(rng())) return Proposal::again(*chosen_);
    }
    return MutationSearch::propose();
  }

  Point mutate(const Point& x) override {
    switch (variant_) {
      case DiscreteVariant::linear_decay:
        rate_ = linear_decay_rate(mutable_count(), num_asks(), budget());
        break;
      case DiscreteVariant::portfolio: {
        const auto rates = portfolio_rates(mutable_count());
        std::uniform_int_distribution<int> pick(0, 2);
        rate_ = rates[static_cast<std::size_t>(pick(rng()))];
        break;
      }
      default:
        break;
    }
    return mutate_with_rate(domain(), vars(), optimistic_parent(x), rate_, rng());
  }

  void observe(const Candidate& candidate, double loss) override {
    if (variant_ != DiscreteVariant::optimistic_noisy) {
      MutationSearch::observe(candidate, loss);
      return;
    }
    // Optimistic parent: lowest mean minus sqrt(2 ln t / n) over told points.
    auto& s = stats_[candidate.id];
    s.sum += loss;
    ++s.count;
    const double log_t = std::log(static_cast<double>(std::max<std::int64_t>(num_tells(), 1)));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [id, st] : stats_) {
      const double score = st.sum / st.count - std::sqrt(2.0 * log_t / st.count);
      if (score < best || (score == best && chosen_ && id < *chosen_)) {
        best = score;
        chosen_ = id;
      }
    }
  }

  void feedback(bool success) override {
    if (variant_ == DiscreteVariant::adaptive) rate_ = adaptive_rate_update(rate_, success, mutable_count());
  }

 private:
  struct Stat {
    double sum = 0.0;
    double count = 0.0;
  };

  [[nodiscard]] Point optimistic_parent(const Point& x) const {
    if (variant_ == DiscreteVariant::optimistic_noisy && chosen_) return candidate(*chosen_).point;
    return x;
  }

  DiscreteVariant variant_;
  double rate_ = 0.5;
  std::unordered_map<CandidateId, Stat> stats_;
  std::optional<CandidateId> chosen_;
};

/// (1+1) with mutation strength k ~ k^-beta on {1..floor(n/2)}.
class FastGa final : public MutationSearch {
 public:
  static constexpr double kDefaultBeta = 1.5;

  explicit FastGa(SolverSetup setup, double beta = kDefaultBeta)
      : MutationSearch(std::move(setup)), beta_(beta) {
    if (!(beta > 1.0)) throw ConfigError("FastGA exponent must exceed 1");
    const auto p = fastga_strength_distribution(mutable_count(), beta_);
    strength_ = std::discrete_distribution<std::size_t>(p.begin(), p.end());
  }

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] std::size_t last_strength() const noexcept { return last_strength_; }

 protected:
  Point mutate(const Point& x) override {
    last_strength_ = strength_(rng()) + 1;
    return mutate_exactly(domain(), vars(), x, last_strength_, rng());
  }

 private:
  double beta_;
  std::discrete_distribution<std::size_t> strength_;
  std::size_t last_strength_ = 0;
};

}  // namespace optbench
