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

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "optbench/core/optimizer.hpp"

namespace optbench {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vector standard_normal(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Base for solvers working on purely continuous domains.
///
/// Solvers see a standardized space u in which the domain center is the
/// origin and each coordinate is divided by its variable scale. Points are
/// clipped to the box bounds on the way out, and observe() receives the
/// internal image of the point that was actually evaluated.
class ContinuousOptimizer : public Optimizer {
 public:
  explicit ContinuousOptimizer(SolverSetup setup) : Optimizer(std::move(setup)) {
    if (!domain().all_continuous()) {
      throw ConfigError("continuous solver used on a domain with discrete variables");
    }
    const auto n = static_cast<Eigen::Index>(domain().size());
    center_.resize(n);
    scale_.resize(n);
    lower_.resize(n);
    upper_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& c = std::get<Continuous>(domain().kind(static_cast<std::size_t>(i)));
      center_[i] = DomainSpec::center_of(c);
      scale_[i] = c.scale;
      lower_[i] = c.lower ? (*c.lower - center_[i]) / c.scale : -std::numeric_limits<double>::infinity();
      upper_[i] = c.upper ? (*c.upper - center_[i]) / c.scale : std::numeric_limits<double>::infinity();
    }
  }

  [[nodiscard]] Eigen::Index dim() const noexcept { return center_.size(); }

  [[nodiscard]] Vector to_internal(std::span<const double> point) const {
    Vector u(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) {
      u[i] = (point[static_cast<std::size_t>(i)] - center_[i]) / scale_[i];
    }
    return u;
  }

  [[nodiscard]] Point to_point(const Vector& u) const {
    Point p(static_cast<std::size_t>(dim()));
    for (Eigen::Index i = 0; i < dim(); ++i) {
      double v = center_[i] + scale_[i] * u[i];
      const auto& c = std::get<Continuous>(domain().kind(static_cast<std::size_t>(i)));
      if (c.lower) v = std::max(v, *c.lower);
      if (c.upper) v = std::min(v, *c.upper);
      if (!std::isfinite(v)) v = center_[i];
      p[static_cast<std::size_t>(i)] = v;
    }
    return p;
  }

  /// Internal box bounds (infinite for unbounded coordinates).
  [[nodiscard]] const Vector& lower() const noexcept { return lower_; }
  [[nodiscard]] const Vector& upper() const noexcept { return upper_; }

  [[nodiscard]] Vector clip(const Vector& u) const { return u.cwiseMax(lower_).cwiseMin(upper_); }

  [[nodiscard]] Vector start_internal() const { return to_internal(start_point()); }

 protected:
  /// Next internal point to evaluate.
  virtual Vector next() = 0;
  /// `asked` is false for points injected through inform().
  virtual void update(CandidateId id, const Vector& u, double loss, bool asked) = 0;
  [[nodiscard]] virtual std::optional<Vector> estimate_internal() const { return std::nullopt; }

  Proposal propose() final { return Proposal::fresh(to_point(next())); }

  void observe(const Candidate& candidate, double loss) final {
    update(candidate.id, to_internal(candidate.point), loss, !informed(candidate.id));
  }

  [[nodiscard]] std::optional<Point> estimate() const final {
    if (auto u = estimate_internal()) return to_point(*u);
    return std::nullopt;
  }

 private:
  Vector center_;
  Vector scale_;
  Vector lower_;
  Vector upper_;
};

}  // namespace optbench
