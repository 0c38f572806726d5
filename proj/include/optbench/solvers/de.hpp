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
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "optbench/solvers/continuous.hpp"

namespace optbench {

/// rand/1/bin trial vector: binomial crossover of `target` with
/// a + F (b - c). One uniformly chosen coordinate always comes from the mutant.
inline Vector de_trial(const Vector& target, const Vector& a, const Vector& b, const Vector& c,
                       double F, double CR, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> pick(0, target.size() - 1);
  const Eigen::Index forced = pick(rng);
  const Vector mutant = a + F * (b - c);
  Vector trial = target;
  for (Eigen::Index j = 0; j < target.size(); ++j) {
    if (j == forced || unit(rng) < CR) trial[j] = mutant[j];
  }
  return trial;
}

/// Selection: the slot keeps its point unless the trial is at least as good.
inline bool de_accepts(double trial_loss, double slot_loss) noexcept { return trial_loss <= slot_loss; }

/// Inverse of the standard normal CDF (Acklam's rational approximation,
/// refined by one Halley step).
inline double normal_quantile(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  double x = 0.0;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - 0.02425) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

struct DeOptions {
  std::size_t population = 0;  // 0: max(30, d)
  double F = 0.8;
  double CR = 0.5;
  bool latin_hypercube = false;
};

/// Differential evolution, rand/1/bin. Initial points are Gaussian in the
/// standardized space, stratified per coordinate in the Latin-hypercube
/// variant; box-bounded coordinates are clipped on output.
class DifferentialEvolution final : public ContinuousOptimizer {
 public:
  struct Slot {
    Vector x;
    double loss = std::numeric_limits<double>::infinity();
  };

  DifferentialEvolution(SolverSetup setup, DeOptions options)
      : ContinuousOptimizer(std::move(setup)), options_(options) {
    if (options_.population == 0) {
      options_.population = std::max<std::size_t>(30, static_cast<std::size_t>(dim()));
    }
    if (options_.population < 4) throw ConfigError("differential evolution needs a population >= 4");
    if (!(options_.F > 0.0 && options_.F <= 2.0)) throw ConfigError("DE weight F must be in (0, 2]");
    if (!(options_.CR >= 0.0 && options_.CR <= 1.0)) throw ConfigError("DE crossover CR must be in [0, 1]");
    initialize();
  }

  [[nodiscard]] const std::vector<Slot>& population() const noexcept { return slots_; }

 protected:
  Vector next() override {
    const std::size_t np = slots_.size();
    if (initialized_ < np) {
      const std::size_t s = initialized_++;
      slot_of_[upcoming_id()] = s;
      return slots_[s].x;
    }
    const std::size_t s = cursor_++ % np;
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::array<std::size_t, 3> idx{};
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t r = 0;
      do {
        r = pick(rng());
      } while (r == s || std::find(idx.begin(), idx.begin() + static_cast<long>(k), r) !=
                             idx.begin() + static_cast<long>(k));
      idx[k] = r;
    }
    Vector trial = de_trial(slots_[s].x, slots_[idx[0]].x, slots_[idx[1]].x, slots_[idx[2]].x,
                            options_.F, options_.CR, rng());
    slot_of_[upcoming_id()] = s;
    return clip(trial);
  }

  void update(CandidateId id, const Vector& u, double loss, bool asked) override {
    if (!asked) {
      auto worst = std::max_element(slots_.begin(), slots_.end(),
                                    [](const Slot& a, const Slot& b) { return a.loss < b.loss; });
      if (loss < worst->loss) *worst = Slot{u, loss};
      return;
    }
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) return;
    Slot& slot = slots_[it->second];
    if (de_accepts(loss, slot.loss)) slot = Slot{u, loss};
    slot_of_.erase(it);
  }

 private:
  void initialize() {
    const std::size_t np = options_.population;
    const Eigen::Index n = dim();
    slots_.assign(np, Slot{});
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(n));
    if (options_.latin_hypercube) {
      for (auto& perm : strata) {
        perm.resize(np);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng());
      }
    }
    const Vector origin = start_internal();
    for (std::size_t s = 0; s < np; ++s) {
      Vector x(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (options_.latin_hypercube) {
          const double v = (static_cast<double>(strata[static_cast<std::size_t>(j)][s]) + unit(rng())) /
                           static_cast<double>(np);
          x[j] = normal_quantile(v);
        } else {
          x[j] = normal(rng());
        }
      }
      slots_[s].x = clip(origin + x);
    }
    if (start()) slots_[0].x = origin;
  }

  DeOptions options_;
  std::vector<Slot> slots_;
  std::size_t initialized_ = 0;
  std::size_t cursor_ = 0;
  std::unordered_map<CandidateId, std::size_t> slot_of_;
};

}  // namespace optbench
