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
#include <memory>
#include <random>
#include <vector>

#include "optbench/core/delegate.hpp"
#include "optbench/core/optimizer.hpp"

namespace optbench {

/// Continuous reparametrization of a mixed domain. A categorical of arity a
/// becomes a block of a logits; every other variable becomes one continuous
/// coordinate.
class SoftmaxEncoding {
 public:
  explicit SoftmaxEncoding(DomainSpec outer, double temperature = 1.0)
      : outer_(std::move(outer)), temperature_(temperature), inner_(build_inner(outer_)) {
    if (!(temperature > 0.0)) throw ConfigError("softmax temperature must be positive");
  }

  [[nodiscard]] const DomainSpec& outer() const noexcept { return outer_; }
  [[nodiscard]] const DomainSpec& inner() const noexcept { return inner_; }
  [[nodiscard]] double temperature() const noexcept { return temperature_; }

  /// Category probabilities softmax(logits / temperature).
  [[nodiscard]] std::vector<double> probabilities(std::span<const double> logits) const {
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = std::exp((logits[i] - top) / temperature_);
      z += p[i];
    }
    for (double& v : p) v /= z;
    return p;
  }

  /// Stochastic realization: categoricals are sampled from the softmax.
  [[nodiscard]] Point sample(std::span<const double> u, Rng& rng) const {
    return decode(u, [&](std::span<const double> logits) {
      const auto p = probabilities(logits);
      std::discrete_distribution<int> pick(p.begin(), p.end());
      return pick(rng);
    });
  }

  /// Deterministic decoding: argmax of each logit block, lowest index on ties.
  [[nodiscard]] Point decode_argmax(std::span<const double> u) const {
    return decode(u, [](std::span<const double> logits) {
      return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    });
  }

  /// Inverse map used for start points: a chosen category gets logit 1.
  [[nodiscard]] Point encode(std::span<const double> x) const {
    Point u;
    u.reserve(inner_.size());
    for (std::size_t i = 0; i < outer_.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Categorical>) {
              for (int c = 0; c < v.arity; ++c) u.push_back(c == static_cast<int>(x[i]) ? 1.0 : 0.0);
            } else if constexpr (std::is_same_v<T, Integer>) {
              const double mid = 0.5 * static_cast<double>(v.low + v.high);
              u.push_back((x[i] - mid) / integer_scale(v));
            } else {
              u.push_back(x[i]);
            }
          },
          outer_.kind(i));
    }
    return u;
  }

 private:
  static double integer_scale(const Integer& v) {
    return std::max(1.0, 0.5 * static_cast<double>(v.high - v.low));
  }

  static DomainSpec build_inner(const DomainSpec& outer) {
    std::vector<VariableKind> kinds;
    for (const auto& var : outer.variables()) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Categorical>) {
              for (int c = 0; c < v.arity; ++c) kinds.emplace_back(Continuous{});
            } else if constexpr (std::is_same_v<T, Continuous>) {
              kinds.emplace_back(v);
            } else {
              kinds.emplace_back(Continuous{});
            }
          },
          var.kind);
    }
    return DomainSpec(std::move(kinds));
  }

  template <typename Choose>
  Point decode(std::span<const double> u, Choose&& choose) const {
    Point x;
    x.reserve(outer_.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < outer_.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Categorical>) {
              const auto n = static_cast<std::size_t>(v.arity);
              x.push_back(static_cast<double>(choose(u.subspan(k, n))));
              k += n;
            } else if constexpr (std::is_same_v<T, Integer>) {
              const double mid = 0.5 * static_cast<double>(v.low + v.high);
              const double r = std::round(mid + u[k++] * integer_scale(v));
              x.push_back(std::clamp(r, static_cast<double>(v.low), static_cast<double>(v.high)));
            } else if constexpr (std::is_same_v<T, UnboundedInteger>) {
              x.push_back(std::round(u[k++]));
            } else {
              double y = u[k++];
              if (v.lower) y = std::max(y, *v.lower);
              if (v.upper) y = std::min(y, *v.upper);
              x.push_back(y);
            }
          },
          outer_.kind(i));
    }
    return x;
  }

  DomainSpec outer_;
  double temperature_;
  DomainSpec inner_;
};

/// Runs a continuous optimizer on the logit encoding of a mixed domain.
/// The inner optimizer must be built on `encoding.inner()`.
class SoftmaxBridge final : public Optimizer {
 public:
  SoftmaxBridge(SolverSetup setup, std::unique_ptr<Optimizer> inner, double temperature = 1.0)
      : Optimizer(std::move(setup)), encoding_(domain(), temperature), inner_(std::move(inner)) {
    if (!inner_.valid()) throw ConfigError("softmax bridge needs an inner optimizer");
    if (!(inner_.get().domain() == encoding_.inner())) {
      throw ConfigError("inner optimizer of the softmax bridge has the wrong domain");
    }
  }

  /// Context for the inner optimizer: same budget and workers. Sampling the
  /// categories makes the inner objective stochastic whenever categoricals
  /// are present, so the inner optimizer runs in noisy mode.
  static RunContext inner_context(const RunContext& outer, double temperature = 1.0) {
    RunContext ctx = outer;
    ctx.domain = SoftmaxEncoding(outer.domain, temperature).inner();
    ctx.noisy = outer.noisy || outer.domain.has_categorical();
    return ctx;
  }

  [[nodiscard]] const SoftmaxEncoding& encoding() const noexcept { return encoding_; }
  [[nodiscard]] const Optimizer& inner() const noexcept { return inner_.get(); }

 protected:
  Proposal propose() override {
    auto asked = inner_.ask();
    if (asked.parent) return Proposal::again(*asked.parent);
    inner_.bind(upcoming_id(), asked.candidate.id);
    return Proposal::fresh(encoding_.sample(asked.candidate.point, rng()));
  }

  void observe(const Candidate& candidate, double loss) override {
    if (!inner_.forward(candidate.id, loss)) inner_.get().inform(encoding_.encode(candidate.point), loss);
  }

  [[nodiscard]] std::optional<Point> estimate() const override {
    const Optimizer& in = inner_.get();
    if (in.num_tells() == 0) return std::nullopt;
    return encoding_.decode_argmax(in.recommend().point);
  }

 private:
  SoftmaxEncoding encoding_;
  ChildLink inner_;
};

}  // namespace optbench
