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

// Derivative-free local searches driven through ask/tell:
//
//   powell        conjugate directions with Brent line minimization and
//                 Powell's direction replacement rule
//   linear_tr     linear models on a simplex, steps to the trust-region
//                 boundary along the model descent (fills the Cobyla slot)
//   quadratic_tr  quadratic models, steps to the model minimizer clipped to
//                 the trust region (fills the SQP slot)
//
// Each search is a coroutine that co_awaits evaluations. Asks beyond the one
// outstanding probe are served with random probes around the best point.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "optbench/solvers/continuous.hpp"
#include "optbench/solvers/probe_task.hpp"
#include "optbench/solvers/quadratic_model.hpp"

namespace optbench {

enum class LocalSearchVariant { powell, linear_tr, quadratic_tr };

/// Best point of an archive, then a step of length `radius` against the
/// least-squares linear model gradient, clipped to [lower, upper].
inline std::optional<Vector> linear_tr_propose(std::span<const Vector> points, std::span<const double> losses,
                                               double radius, const Vector& lower, const Vector& upper) {
  if (points.size() < 2) return std::nullopt;
  const auto best = static_cast<std::size_t>(
      std::min_element(losses.begin(), losses.end()) - losses.begin());
  const Eigen::Index d = points[0].size();
  Matrix D(static_cast<Eigen::Index>(points.size() - 1), d);
  Vector df(D.rows());
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == best) continue;
    D.row(r) = (points[i] - points[best]).transpose();
    df[r] = losses[i] - losses[best];
    ++r;
  }
  const Vector g = D.completeOrthogonalDecomposition().solve(df);
  const double norm = g.norm();
  if (!(norm > 0.0) || !g.allFinite()) return std::nullopt;
  return Vector((points[best] - radius * g / norm).cwiseMax(lower).cwiseMin(upper));
}

/// Quadratic-model step from the best archive point: a full model when the
/// archive holds (d+1)(d+2)/2 points, a separable one from 2d+1 points.
inline std::optional<Vector> quadratic_tr_propose(std::span<const Vector> points, std::span<const double> losses,
                                                  double radius, const Vector& lower, const Vector& upper) {
  if (points.empty()) return std::nullopt;
  const auto d = static_cast<std::size_t>(points[0].size());
  std::optional<QuadraticModel> model;
  if (points.size() >= quadratic_parameter_count(d, QuadraticForm::full)) {
    model = fit_quadratic(points, losses, QuadraticForm::full);
  }
  if (!model && points.size() >= quadratic_parameter_count(d, QuadraticForm::diagonal)) {
    model = fit_quadratic(points, losses, QuadraticForm::diagonal);
  }
  if (!model) return std::nullopt;
  const auto best = static_cast<std::size_t>(
      std::min_element(losses.begin(), losses.end()) - losses.begin());
  const Vector step = trust_region_step(*model, points[best], radius);
  return Vector((points[best] + step).cwiseMax(lower).cwiseMin(upper));
}

struct LineResult {
  double alpha = 0.0;
  double value = 0.0;
};

class LocalSearch final : public ContinuousOptimizer {
 public:
  LocalSearch(SolverSetup setup, LocalSearchVariant variant, double initial_radius = 1.0)
      : ContinuousOptimizer(std::move(setup)), variant_(variant), radius_(initial_radius) {
    if (!(initial_radius > 0.0)) throw ConfigError("local search radius must be positive");
    directions_ = Matrix::Identity(dim(), dim());
  }

  [[nodiscard]] LocalSearchVariant variant() const noexcept { return variant_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] const Matrix& directions() const noexcept { return directions_; }
  [[nodiscard]] std::int64_t sweeps() const noexcept { return sweeps_; }
  [[nodiscard]] std::int64_t random_probes() const noexcept { return random_probes_; }

 protected:
  Vector next() override {
    if (!task_.valid() || task_.done()) {
      task_ = run();
      task_.start();
      task_.rethrow_if_failed();
    }
    if (!probe_id_ && channel_.has_probe()) {
      probe_id_ = upcoming_id();
      return channel_.probe();
    }
    ++random_probes_;
    const Vector origin = best_point_.size() ? best_point_ : clip(start_internal());
    Vector dir = standard_normal(rng(), dim());
    dir /= std::max(dir.norm(), 1e-300);
    return clip(origin + radius_ * dir);
  }

  void update(CandidateId id, const Vector& u, double loss, bool) override {
    if (loss < best_loss_) {
      best_loss_ = loss;
      best_point_ = u;
    }
    if (probe_id_ && *probe_id_ == id) {
      probe_id_.reset();
      channel_.resume(loss);
      task_.rethrow_if_failed();
    }
  }

  [[nodiscard]] std::optional<Vector> estimate_internal() const override {
    // Noisy runs average repeated measurements; the search base is the
    // better-estimated point.
    if (noisy() && base_point_.size()) return base_point_;
    return std::nullopt;
  }

 private:
  using Task = coro::Task<coro::Unit>;

  coro::Task<double> measure(Vector x) {
    x = clip(x);
    const int repeats = noisy() ? 3 : 1;
    double sum = 0.0;
    for (int i = 0; i < repeats; ++i) sum += co_await channel_.evaluate(x);
    co_return sum / repeats;
  }

  Task run() {
    switch (variant_) {
      case LocalSearchVariant::powell:
        return powell();
      case LocalSearchVariant::linear_tr:
        return linear_tr();
      case LocalSearchVariant::quadratic_tr:
        break;
    }
    return quadratic_tr();
  }

  // Bracketing (golden-ratio expansion with parabolic extrapolation) followed
  // by Brent's method along origin + alpha * dir.
  coro::Task<LineResult> line_minimize(Vector origin, Vector dir, double f0, double step, double tol_abs) {
    constexpr double kGold = 1.618033988749895;
    constexpr double kCGold = 0.3819660112501051;
    constexpr double kLimit = 100.0;
    constexpr double kTiny = 1e-20;
    constexpr double kTol = 1e-10;
    auto at = [&](double alpha) -> Vector { return origin + alpha * dir; };

    double a = 0.0, fa = f0;
    double b = step;
    double fb = co_await measure(at(b));
    if (fb > fa) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
    double c = b + kGold * (b - a);
    double fc = co_await measure(at(c));
    int guard = 0;
    while (fb > fc && guard++ < 40) {
      const double r = (b - a) * (fb - fc);
      const double q = (b - c) * (fb - fa);
      const double diff = std::max(std::abs(q - r), kTiny);
      double u = b - ((b - c) * q - (b - a) * r) / (2.0 * std::copysign(diff, q - r));
      const double ulim = b + kLimit * (c - b);
      double fu = 0.0;
      if ((b - u) * (u - c) > 0.0) {
        fu = co_await measure(at(u));
        if (fu < fc) {
          a = b, fa = fb, b = u, fb = fu;
          break;
        }
        if (fu > fb) {
          c = u, fc = fu;
          break;
        }
        u = c + kGold * (c - b);
        fu = co_await measure(at(u));
      } else if ((c - u) * (u - ulim) > 0.0) {
        fu = co_await measure(at(u));
        if (fu < fc) {
          b = c, fb = fc, c = u, fc = fu;
          u = c + kGold * (c - b);
          fu = co_await measure(at(u));
        }
      } else if ((u - ulim) * (ulim - c) >= 0.0) {
        u = ulim;
        fu = co_await measure(at(u));
      } else {
        u = c + kGold * (c - b);
        fu = co_await measure(at(u));
      }
      a = b, fa = fb, b = c, fb = fc, c = u, fc = fu;
    }
    if (!(fb <= fa && fb <= fc)) {
      // No interior bracket (flat or clipped); keep the best sampled point.
      LineResult best{0.0, f0};
      if (fa < best.value) best = {a, fa};
      if (fb < best.value) best = {b, fb};
      if (fc < best.value) best = {c, fc};
      co_return best;
    }

    double lo = std::min(a, c), hi = std::max(a, c);
    double x = b, fx = fb;
    double w = fa <= fc ? a : c, fw = std::min(fa, fc);
    double v = fa <= fc ? c : a, fv = std::max(fa, fc);
    double d = 0.0, e = hi - lo;
    for (int iter = 0; iter < 60; ++iter) {
      const double xm = 0.5 * (lo + hi);
      const double tol1 = kTol * std::abs(x) + tol_abs;
      const double tol2 = 2.0 * tol1;
      if (std::abs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;
      bool golden = true;
      if (std::abs(e) > tol1) {
        const double r = (x - w) * (fx - fv);
        double q = (x - v) * (fx - fw);
        double p = (x - v) * q - (x - w) * r;
        q = 2.0 * (q - r);
        if (q > 0.0) p = -p;
        q = std::abs(q);
        const double etemp = e;
        e = d;
        if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (lo - x) || p >= q * (hi - x))) {
          d = p / q;
          const double u = x + d;
          if (u - lo < tol2 || hi - u < tol2) d = std::copysign(tol1, xm - x);
          golden = false;
        }
      }
      if (golden) {
        e = (x >= xm) ? lo - x : hi - x;
        d = kCGold * e;
      }
      const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
      const double fu = co_await measure(at(u));
      if (fu <= fx) {
        if (u >= x) {
          lo = x;
        } else {
          hi = x;
        }
        v = w, fv = fw, w = x, fw = fx, x = u, fx = fu;
      } else {
        if (u < x) {
          lo = u;
        } else {
          hi = u;
        }
        if (fu <= fw || w == x) {
          v = w, fv = fw, w = u, fw = fu;
        } else if (fu <= fv || v == x || v == w) {
          v = u, fv = fu;
        }
      }
    }
    co_return LineResult{x, fx};
  }

  [[nodiscard]] static bool well_conditioned(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return s.minCoeff() > 0.0 && s.maxCoeff() / s.minCoeff() < 1e10;
  }

  Task powell() {
    const Eigen::Index n = dim();
    Vector x = clip(start_internal());
    double fx = co_await measure(x);
    base_point_ = x;
    double step = radius_;
    for (;;) {
      const Vector x0 = x;
      const double f0 = fx;
      double biggest = 0.0;
      Eigen::Index ibig = 0;
      const double tol_abs = 1e-12 * step;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double before = fx;
        const Vector dir = directions_.col(i);
        const LineResult r = co_await line_minimize(x, dir, fx, step, tol_abs);
        if (r.value < fx) {
          x = clip(x + r.alpha * dir);
          fx = r.value;
        }
        if (before - fx > biggest) {
          biggest = before - fx;
          ibig = i;
        }
      }
      ++sweeps_;
      base_point_ = x;
      const Vector delta = x - x0;
      const double moved = delta.norm();
      if (!(moved > 0.0)) {
        directions_ = Matrix::Identity(n, n);
        step = std::max(step * 0.1, 1e-300);
        continue;
      }
      step = std::clamp(moved, 1e-300, radius_);
      const Vector xe = clip(2.0 * x - x0);
      const double fe = co_await measure(xe);
      if (fe < f0) {
        const double t = 2.0 * (f0 - 2.0 * fx + fe) * (f0 - fx - biggest) * (f0 - fx - biggest) -
                         biggest * (f0 - fe) * (f0 - fe);
        if (t < 0.0) {
          const Vector dir = delta / moved;
          const LineResult r = co_await line_minimize(x, dir, fx, moved, 1e-12 * moved);
          if (r.value < fx) {
            x = clip(x + r.alpha * dir);
            fx = r.value;
          }
          directions_.col(ibig) = directions_.col(n - 1);
          directions_.col(n - 1) = dir;
          if (!well_conditioned(directions_)) directions_ = Matrix::Identity(n, n);
        }
      }
      if (fe < fx) {
        x = xe;
        fx = fe;
      }
      base_point_ = x;
    }
  }

  Task linear_tr() {
    const Eigen::Index n = dim();
    constexpr double kMinRadius = 1e-14;
    Vector xb = clip(start_internal());
    double fb = co_await measure(xb);
    base_point_ = xb;
    std::vector<Vector> vx;
    std::vector<double> vf;
    auto rebuild = [&]() -> coro::Task<coro::Unit> {
      vx.clear();
      vf.clear();
      for (Eigen::Index i = 0; i < n; ++i) {
        Vector y = xb;
        y[i] += radius_;
        y = clip(y);
        if ((y - xb).norm() == 0.0) {
          y = xb;
          y[i] -= radius_;
          y = clip(y);
        }
        const double fy = co_await measure(y);
        vx.push_back(y);
        vf.push_back(fy);
      }
      co_return coro::Unit{};
    };
    co_await rebuild();
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (;;) {
      // Adopt a better vertex as the base.
      const auto imin = static_cast<std::size_t>(std::min_element(vf.begin(), vf.end()) - vf.begin());
      if (vf[imin] < fb) {
        std::swap(vx[imin], xb);
        std::swap(vf[imin], fb);
      }
      base_point_ = xb;
      std::vector<Vector> pts = vx;
      std::vector<double> fs = vf;
      pts.push_back(xb);
      fs.push_back(fb);
      auto proposal = linear_tr_propose(pts, fs, radius_, lower(), upper());
      if (!proposal || (*proposal - xb).norm() == 0.0) {
        radius_ = std::max(radius_ * 0.5, kMinRadius);
        co_await rebuild();
        continue;
      }
      const Vector xn = *proposal;
      const double fn = co_await measure(xn);
      auto farthest_from = [&](const Vector& p) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < vx.size(); ++i) {
          if ((vx[i] - p).norm() > (vx[far] - p).norm()) far = i;
        }
        return far;
      };
      if (fn < fb) {
        const std::size_t far = farthest_from(xn);
        vx[far] = xb;
        vf[far] = fb;
        xb = xn;
        fb = fn;
      } else {
        const std::size_t far = farthest_from(xb);
        vx[far] = xn;
        vf[far] = fn;
        radius_ = std::max(radius_ * 0.5, kMinRadius);
        // Geometry: pull the farthest vertex back into the trust region.
        const std::size_t worst = farthest_from(xb);
        if ((vx[worst] - xb).norm() > 2.0 * radius_) {
          Vector y = xb;
          const Eigen::Index k = pick(rng());
          y[k] += (rng()() & 1U) ? radius_ : -radius_;
          y = clip(y);
          vx[worst] = y;
          vf[worst] = co_await measure(y);
        }
      }
    }
  }

  Task quadratic_tr() {
    const Eigen::Index n = dim();
    const auto d = static_cast<std::size_t>(n);
    constexpr double kMinRadius = 1e-14;
    constexpr double kMaxRadius = 1e3;
    Vector xb = clip(start_internal());
    double fb = co_await measure(xb);
    base_point_ = xb;
    std::vector<Vector> xs{xb};
    std::vector<double> fs{fb};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector y = xb;
        y[i] += sign * radius_;
        y = clip(y);
        const double fy = co_await measure(y);
        xs.push_back(y);
        fs.push_back(fy);
      }
    }
    auto random_probe = [&]() -> coro::Task<coro::Unit> {
      Vector dir = standard_normal(rng(), n);
      dir /= std::max(dir.norm(), 1e-300);
      const Vector y = clip(xb + radius_ * dir);
      const double fy = co_await measure(y);
      xs.push_back(y);
      fs.push_back(fy);
      ++random_probes_;
      if (fy < fb) {
        xb = y;
        fb = fy;
      }
      co_return coro::Unit{};
    };
    const std::size_t full = quadratic_parameter_count(d, QuadraticForm::full);
    const std::size_t diag = quadratic_parameter_count(d, QuadraticForm::diagonal);
    for (;;) {
      base_point_ = xb;
      // Fit on the archive points nearest to the base.
      const std::size_t want = xs.size() >= full ? 2 * full : 2 * diag;
      std::vector<std::size_t> idx(xs.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      const std::size_t m = std::min(want, xs.size());
      std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(m), idx.end(),
                        [&](std::size_t a, std::size_t b) { return (xs[a] - xb).norm() < (xs[b] - xb).norm(); });
      std::vector<Vector> px;
      std::vector<double> pf;
      for (std::size_t i = 0; i < m; ++i) {
        px.push_back(xs[idx[i]]);
        pf.push_back(fs[idx[i]]);
      }
      px.push_back(xb);
      pf.push_back(fb);
      auto proposal = quadratic_tr_propose(px, pf, radius_, lower(), upper());
      if (!proposal || (*proposal - xb).norm() <= 1e-15 * (1.0 + xb.norm())) {
        radius_ = std::max(radius_ * 0.5, kMinRadius);
        co_await random_probe();
        continue;
      }
      const Vector xn = *proposal;
      const double fn = co_await measure(xn);
      xs.push_back(xn);
      fs.push_back(fn);
      if (fn < fb) {
        const double len = (xn - xb).norm();
        xb = xn;
        fb = fn;
        if (len >= 0.99 * radius_) radius_ = std::min(2.0 * radius_, kMaxRadius);
      } else {
        radius_ = std::max(radius_ * 0.5, kMinRadius);
        co_await random_probe();
      }
    }
  }

  LocalSearchVariant variant_;
  double radius_;
  Matrix directions_;
  std::int64_t sweeps_ = 0;
  std::int64_t random_probes_ = 0;
  coro::Channel channel_;
  Task task_;
  std::optional<CandidateId> probe_id_;
  Vector best_point_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  Vector base_point_;
};

}  // namespace optbench
