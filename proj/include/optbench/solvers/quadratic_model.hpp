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
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace optbench {

/// q(x) = c + g.(x - origin) + 1/2 (x - origin)' H (x - origin)
struct QuadraticModel {
  Eigen::VectorXd origin;
  double c = 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;

  [[nodiscard]] double value(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd z = x - origin;
    return c + g.dot(z) + 0.5 * z.dot(H * z);
  }

  [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    return g + H * (x - origin);
  }

  [[nodiscard]] bool positive_definite() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    return ev.minCoeff() > 1e-12 * top;
  }

  /// Unconstrained minimizer; only meaningful when positive_definite().
  [[nodiscard]] Eigen::VectorXd minimizer() const { return origin - H.ldlt().solve(g); }
};

enum class QuadraticForm {
  full,      // all pairwise terms
  diagonal,  // squares only
};

[[nodiscard]] inline std::size_t quadratic_parameter_count(std::size_t d, QuadraticForm form) {
  return form == QuadraticForm::full ? (d + 1) * (d + 2) / 2 : 2 * d + 1;
}

/// Least-squares quadratic fit. Coordinates are centered and scaled before
/// fitting for conditioning; the returned model is in the original
/// coordinates. Returns nothing when the design is rank deficient.
[[nodiscard]] inline std::optional<QuadraticModel> fit_quadratic(
    std::span<const Eigen::VectorXd> points, std::span<const double> values,
    QuadraticForm form = QuadraticForm::full) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n == 0) return std::nullopt;
  const Eigen::Index d = points[0].size();
  const auto p = static_cast<Eigen::Index>(quadratic_parameter_count(static_cast<std::size_t>(d), form));
  if (n < p) return std::nullopt;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& x : points) mean += x;
  mean /= static_cast<double>(n);
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(d);
  for (const auto& x : points) scale += (x - mean).cwiseAbs2();
  scale = (scale / static_cast<double>(n)).cwiseSqrt();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(scale[i] > 0.0)) return std::nullopt;
  }

  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd z = (points[static_cast<std::size_t>(r)] - mean).cwiseQuotient(scale);
    Eigen::Index col = 0;
    A(r, col++) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) A(r, col++) = z[i];
    if (form == QuadraticForm::full) {
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) A(r, col++) = (i == j ? 0.5 : 1.0) * z[i] * z[j];
      }
    } else {
      for (Eigen::Index i = 0; i < d; ++i) A(r, col++) = 0.5 * z[i] * z[i];
    }
    y[r] = values[static_cast<std::size_t>(r)];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < p) return std::nullopt;
  const Eigen::VectorXd theta = qr.solve(y);
  if (!theta.allFinite()) return std::nullopt;

  Eigen::VectorXd gz(d);
  Eigen::MatrixXd Hz = Eigen::MatrixXd::Zero(d, d);
  Eigen::Index col = 1;
  for (Eigen::Index i = 0; i < d; ++i) gz[i] = theta[col++];
  if (form == QuadraticForm::full) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        Hz(i, j) = theta[col];
        Hz(j, i) = theta[col];
        ++col;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < d; ++i) Hz(i, i) = theta[col++];
  }

  const Eigen::VectorXd inv = scale.cwiseInverse();
  QuadraticModel model;
  model.origin = mean;
  model.c = theta[0];
  model.g = gz.cwiseProduct(inv);
  model.H = inv.asDiagonal() * Hz * inv.asDiagonal();
  return model;
}

/// Minimizes the model inside the ball of radius `radius` around `base`.
/// Positive-definite models take the Newton step, radially clipped to the
/// ball; otherwise the boundary solution of the trust-region subproblem is
/// found by bisection on the shift.
[[nodiscard]] inline Eigen::VectorXd trust_region_step(const QuadraticModel& model,
                                                       const Eigen::VectorXd& base, double radius) {
  const Eigen::VectorXd g = model.gradient(base);
  const Eigen::Index d = g.size();
  if (model.positive_definite()) {
    Eigen::VectorXd s = -model.H.ldlt().solve(g);
    const double norm = s.norm();
    if (norm > radius) s *= radius / norm;
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.H);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  const Eigen::VectorXd gq = Q.transpose() * g;
  auto step_for = [&](double shift) {
    Eigen::VectorXd s(d);
    for (Eigen::Index i = 0; i < d; ++i) s[i] = -gq[i] / (lambda[i] + shift);
    return s;
  };
  double lo = std::max(0.0, -lambda.minCoeff()) + 1e-14 * (1.0 + std::abs(lambda.minCoeff()));
  if (gq.norm() == 0.0) {
    // Saddle with zero gradient: move along the most negative curvature.
    return radius * Q.col(0);
  }
  double hi = lo + g.norm() / radius + lambda.cwiseAbs().maxCoeff() + 1.0;
  if (step_for(lo).norm() <= radius) return Q * step_for(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (step_for(mid).norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Eigen::VectorXd s = Q * step_for(hi);
  const double norm = s.norm();
  if (norm > radius) s *= radius / norm;
  return s;
}

/// Meta-model proposal on an evaluation archive: fit a full quadratic on the
/// most recent points and return its minimizer when the fit is convex and the
/// minimizer stays within the sampled bounding box inflated twice.
[[nodiscard]] inline std::optional<Eigen::VectorXd> metamodel_propose(
    std::span<const Eigen::VectorXd> points, std::span<const double> values) {
  if (points.empty()) return std::nullopt;
  const auto d = static_cast<std::size_t>(points[0].size());
  const std::size_t k = quadratic_parameter_count(d, QuadraticForm::full);
  if (points.size() < k + d) return std::nullopt;
  const std::size_t window = std::min(points.size(), 2 * k);
  const std::size_t first = points.size() - window;
  auto recent_points = points.subspan(first);
  auto recent_values = values.subspan(first);

  auto model = fit_quadratic(recent_points, recent_values, QuadraticForm::full);
  if (!model || !model->positive_definite()) return std::nullopt;
  Eigen::VectorXd x = model->minimizer();
  if (!x.allFinite()) return std::nullopt;

  Eigen::VectorXd lo = recent_points[0];
  Eigen::VectorXd hi = recent_points[0];
  for (const auto& p : recent_points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::VectorXd mid = 0.5 * (lo + hi);
  const Eigen::VectorXd half = 0.5 * (hi - lo);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - mid[i]) > 2.0 * half[i]) return std::nullopt;
  }
  return x;
}

}  // namespace optbench
