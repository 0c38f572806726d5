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

// CMA-ES with cumulative step-size adaptation, rank-one and rank-mu updates.
// The diagonal variant keeps C diagonal and uses the learning rates scaled by
// (n + 2) / 3, as in separable CMA-ES.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "optbench/solvers/continuous.hpp"

namespace optbench {

/// Positive, non-increasing log-rank weights summing to one.
inline std::vector<double> cma_recombination_weights(std::size_t mu) {
  std::vector<double> w(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    w[i] = std::log(static_cast<double>(mu) + 0.5) - std::log(static_cast<double>(i + 1));
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

inline std::size_t cma_default_population(std::size_t n) {
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

struct CmaState {
  Vector mean;
  double sigma = 1.0;
  Matrix C;
  Vector p_sigma;
  Vector p_c;
  std::size_t lambda = 0;
  std::size_t mu = 0;
  std::vector<double> weights;
  bool diagonal = false;
  std::size_t generation = 0;
  int repairs = 0;

  // Derived per update.
  Matrix B;  // eigenvectors of C
  Vector D;  // sqrt of eigenvalues of C

  static CmaState initial(const Vector& mean, double sigma, std::size_t lambda, bool diagonal) {
    const auto n = mean.size();
    CmaState s;
    s.mean = mean;
    s.sigma = sigma;
    s.C = Matrix::Identity(n, n);
    s.B = Matrix::Identity(n, n);
    s.D = Vector::Ones(n);
    s.p_sigma = Vector::Zero(n);
    s.p_c = Vector::Zero(n);
    s.lambda = std::max<std::size_t>(lambda, 2);
    s.mu = s.lambda / 2;
    s.weights = cma_recombination_weights(s.mu);
    s.diagonal = diagonal;
    return s;
  }

  [[nodiscard]] Vector sample(Rng& rng) const {
    const Vector z = standard_normal(rng, mean.size());
    if (diagonal) return mean + sigma * D.cwiseProduct(z);
    return mean + sigma * (B * D.cwiseProduct(z));
  }
};

/// One generation update. `points` and `losses` hold at least mu entries.
inline void cma_step(CmaState& s, const std::vector<Vector>& points, const std::vector<double>& losses) {
  const auto n = static_cast<double>(s.mean.size());
  const Eigen::Index dim = s.mean.size();
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });

  const std::size_t mu = std::min(s.mu, points.size());
  std::vector<double> w = s.weights;
  w.resize(mu);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= wsum;
  double sq = 0.0;
  for (double x : w) sq += x * x;
  const double mueff = 1.0 / sq;

  const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
  const double cs = (mueff + 2.0) / (n + mueff + 5.0);
  double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
  double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0) * (n + 2.0) + mueff));
  if (s.diagonal) {
    const double boost = (n + 2.0) / 3.0;
    c1 = std::min(1.0, c1 * boost);
    cmu = std::min(1.0 - c1, cmu * boost);
  }
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  const Vector old_mean = s.mean;
  Vector new_mean = Vector::Zero(dim);
  for (std::size_t i = 0; i < mu; ++i) new_mean += w[i] * points[order[i]];
  s.mean = new_mean;

  const Vector y = (s.mean - old_mean) / s.sigma;
  Vector c_inv_sqrt_y;
  if (s.diagonal) {
    c_inv_sqrt_y = y.cwiseQuotient(s.D);
  } else {
    c_inv_sqrt_y = s.B * (s.B.transpose() * y).cwiseQuotient(s.D);
  }
  s.p_sigma = (1.0 - cs) * s.p_sigma + std::sqrt(cs * (2.0 - cs) * mueff) * c_inv_sqrt_y;
  ++s.generation;
  const double ps_norm = s.p_sigma.norm();
  const double denom = std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * static_cast<double>(s.generation)));
  const bool hsig = ps_norm / denom / chi_n < 1.4 + 2.0 / (n + 1.0);
  s.p_c = (1.0 - cc) * s.p_c + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * y;

  const double c1a = c1 * (1.0 - (hsig ? 0.0 : 1.0) * cc * (2.0 - cc));
  if (s.diagonal) {
    Vector diag = s.C.diagonal();
    Vector rank_mu = Vector::Zero(dim);
    for (std::size_t i = 0; i < mu; ++i) {
      const Vector yi = (points[order[i]] - old_mean) / s.sigma;
      rank_mu += w[i] * yi.cwiseAbs2();
    }
    diag = (1.0 - c1a - cmu) * diag + c1 * s.p_c.cwiseAbs2() + cmu * rank_mu;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (!(diag[i] > 1e-12)) {
        diag[i] = 1e-12;
        ++s.repairs;
      }
    }
    s.C = diag.asDiagonal();
    s.D = diag.cwiseSqrt();
  } else {
    Matrix rank_mu = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < mu; ++i) {
      const Vector yi = (points[order[i]] - old_mean) / s.sigma;
      rank_mu.noalias() += w[i] * yi * yi.transpose();
    }
    s.C = (1.0 - c1a - cmu) * s.C + c1 * s.p_c * s.p_c.transpose() + cmu * rank_mu;
    s.C = 0.5 * (s.C + s.C.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.C);
    Vector ev = eig.eigenvalues();
    bool repaired = false;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (!(ev[i] > 1e-12)) {
        ev[i] = 1e-12;
        repaired = true;
      }
    }
    s.B = eig.eigenvectors();
    if (repaired) {
      ++s.repairs;
      s.C = s.B * ev.asDiagonal() * s.B.transpose();
      s.C = 0.5 * (s.C + s.C.transpose());
    }
    s.D = ev.cwiseSqrt();
  }

  s.sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));
  s.sigma = std::clamp(s.sigma, 1e-300, 1e300);
}

/// Ask/tell CMA-ES. The population size is raised to num_workers so that a
/// full wave fits in one generation.
class CmaEs final : public ContinuousOptimizer {
 public:
  CmaEs(SolverSetup setup, bool diagonal) : ContinuousOptimizer(std::move(setup)) {
    const auto n = static_cast<std::size_t>(dim());
    const std::size_t lambda = std::max<std::size_t>(cma_default_population(n),
                                                     static_cast<std::size_t>(context().num_workers));
    state_ = CmaState::initial(start_internal(), 1.0, lambda, diagonal);
  }

  [[nodiscard]] const CmaState& state() const noexcept { return state_; }
  [[nodiscard]] std::size_t population_size() const noexcept { return state_.lambda; }

 protected:
  Vector next() override { return state_.sample(rng()); }

  // Under noise the distribution mean is a better estimate than the luckiest
  // sample.
  [[nodiscard]] std::optional<Vector> estimate_internal() const override {
    if (noisy() && state_.generation > 0) return clip(state_.mean);
    return std::nullopt;
  }

  void update(CandidateId, const Vector& u, double loss, bool) override {
    buffer_points_.push_back(u);
    buffer_losses_.push_back(loss);
    if (buffer_points_.size() >= state_.lambda) {
      cma_step(state_, buffer_points_, buffer_losses_);
      buffer_points_.clear();
      buffer_losses_.clear();
    }
  }

 private:
  CmaState state_;
  std::vector<Vector> buffer_points_;
  std::vector<double> buffer_losses_;
};

}  // namespace optbench
