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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "optbench/core/run_loop.hpp"
#include "optbench/solvers/cma.hpp"
#include "optbench/solvers/de.hpp"
#include "optbench/solvers/es.hpp"
#include "optbench/solvers/local_search.hpp"
#include "optbench/solvers/metamodel.hpp"
#include "optbench/solvers/recentering.hpp"
#include "optbench/solvers/tbpsa.hpp"

namespace optbench {
namespace {

using Loss = std::function<double(std::span<const double>)>;

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

SolverSetup setup(DomainSpec domain, std::int64_t budget, std::uint64_t seed, std::int64_t workers = 1,
                  bool noisy = false, std::optional<Point> start = std::nullopt) {
  return SolverSetup{RunContext{std::move(domain), budget, workers, noisy, 0}, seed, std::move(start)};
}

// Sequential ask/tell until the budget is spent or `stop` returns true.
void drive(Optimizer& opt, const Loss& f, const std::function<bool()>& stop = {}) {
  while (opt.num_asks() < opt.budget()) {
    if (stop && stop()) return;
    const Candidate c = opt.ask();
    opt.tell(c, f(c.point));
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Two-sided Mann-Whitney rank-sum p-value, normal approximation.
double rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::pair<double, int>> all;
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end());
  std::vector<double> rank(all.size());
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    for (std::size_t k = i; k < j; ++k) rank[k] = 0.5 * static_cast<double>(i + j + 1);
    i = j;
  }
  double ra = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].second == 0) ra += rank[i];
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double u = ra - n1 * (n1 + 1.0) / 2.0;
  const double mean = n1 * n2 / 2.0;
  const double sd = std::sqrt(n1 * n2 * (n1 + n2 + 1.0) / 12.0);
  const double z = std::abs(u - mean) / sd;
  return std::erfc(z / std::sqrt(2.0));
}

// ---- (1+1)-ES

TEST(OnePlusOneEs, StepSizeConstants) {
  EsState s;
  es_one_plus_one_step(s, Vector::Zero(1), 1.0);
  EXPECT_DOUBLE_EQ(s.sigma, 2.0);
  EsState f;
  f.incumbent_loss = 0.0;
  es_one_plus_one_step(f, Vector::Zero(1), 1.0);
  EXPECT_NEAR(f.sigma, std::pow(2.0, -0.25), 1e-15);
  EXPECT_NEAR(f.c_up * std::pow(f.c_down, 4), 1.0, 1e-15);
}

TEST(OnePlusOneEs, FifthRuleStationarity) {
  EsState s;
  s.incumbent_loss = 10.0;
  es_one_plus_one_step(s, Vector::Zero(1), 5.0);
  for (int i = 0; i < 4; ++i) es_one_plus_one_step(s, Vector::Zero(1), 6.0);
  EXPECT_NEAR(s.sigma, 1.0, 1e-14);
}

TEST(OnePlusOneEs, RandomScheduleMatchesClosedForm) {
  std::mt19937_64 gen(11);
  EsState s;
  s.incumbent_loss = 0.0;
  int succ = 0, fail = 0;
  for (int i = 0; i < 60; ++i) {
    const bool up = gen() % 3 == 0;
    es_one_plus_one_step(s, Vector::Zero(1), up ? s.incumbent_loss - 1.0 : s.incumbent_loss + 1.0);
    up ? ++succ : ++fail;
  }
  const double expected = std::pow(2.0, succ) * std::pow(2.0, -0.25 * fail);
  EXPECT_NEAR(s.sigma / expected, 1.0, 1e-12);
}

TEST(OnePlusOneEs, StepSizeClampedAtFloor) {
  EsState s;
  s.incumbent_loss = 0.0;
  for (int i = 0; i < 400; ++i) es_one_plus_one_step(s, Vector::Zero(1), 1.0);
  EXPECT_EQ(s.sigma, kMinStepSize);
  EXPECT_GT(s.clamp_events, 0);
}

TEST(OnePlusOneEs, FirstAskIsGaussianAroundCenter) {
  OnePlusOneEs es(setup(DomainSpec::continuous(3), 10, 1));
  const Candidate c = es.ask();
  ASSERT_EQ(c.point.size(), 3u);
  EXPECT_GT(sphere(c.point), 0.0);
  EXPECT_LT(sphere(c.point), 100.0);
}

TEST(OnePlusOneEs, RecommendsIncumbent) {
  OnePlusOneEs es(setup(DomainSpec::continuous(2), 200, 3));
  drive(es, sphere);
  EXPECT_EQ(es.recommend().point, es.incumbent()->point);
  EXPECT_LT(sphere(es.recommend().point), 1e-3);
}

// ---- CMA-ES

TEST(Cma, RecombinationWeights) {
  const auto w = cma_recombination_weights(3);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_GT(w[i], 0.0);
    if (i > 0) {
      EXPECT_LE(w[i], w[i - 1]);
    }
    sum += w[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Cma, DefaultPopulation) {
  EXPECT_EQ(cma_default_population(2), 6u);
  EXPECT_EQ(cma_default_population(10), 10u);
}

TEST(Cma, SphereTwoDimensionsMedianBelowTolerance) {
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CmaEs cma(setup(DomainSpec::continuous(2), 500, seed), false);
    drive(cma, sphere);
    finals.push_back(sphere(cma.recommend().point));
  }
  EXPECT_LT(median(finals), 1e-6);
}

TEST(Cma, CovarianceStaysSymmetricAndDiagonalStaysDiagonal) {
  auto ellipsoid = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(10.0, static_cast<double>(i)) * x[i] * x[i];
    return s;
  };
  CmaEs full(setup(DomainSpec::continuous(5), 600, 4), false);
  CmaEs diag(setup(DomainSpec::continuous(5), 600, 4), true);
  for (CmaEs* cma : {&full, &diag}) {
    std::size_t last_gen = 0;
    while (cma->num_asks() < cma->budget()) {
      const Candidate c = cma->ask();
      cma->tell(c, ellipsoid(c.point));
      if (cma->state().generation != last_gen) {
        last_gen = cma->state().generation;
        const Matrix& C = cma->state().C;
        EXPECT_LE((C - C.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        if (cma->state().diagonal) {
          for (Eigen::Index i = 0; i < C.rows(); ++i) {
            for (Eigen::Index j = 0; j < C.cols(); ++j) {
              if (i != j) {
                ASSERT_EQ(C(i, j), 0.0);
              }
            }
          }
        }
      }
    }
    EXPECT_GT(last_gen, 10u);
  }
}

TEST(Cma, PopulationCoversWorkers) {
  CmaEs cma(setup(DomainSpec::continuous(3), 100, 0, 20), false);
  EXPECT_EQ(cma.population_size(), 20u);
}

TEST(Cma, RotationDoesNotChangeBehaviourStatistically) {
  const int d = 5;
  Vector scales(d);
  for (int i = 0; i < d; ++i) scales[i] = std::pow(10.0, i / 2.0);
  std::mt19937_64 gen(99);
  Matrix gauss(d, d);
  std::normal_distribution<double> normal;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) gauss(i, j) = normal(gen);
  }
  const Matrix M = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
  auto plain = [&](std::span<const double> x) {
    const Vector v = Eigen::Map<const Vector>(x.data(), d);
    return v.cwiseProduct(scales).squaredNorm() + 0.0;
  };
  auto rotated = [&](std::span<const double> x) {
    const Vector v = M * Eigen::Map<const Vector>(x.data(), d);
    return v.cwiseProduct(scales).squaredNorm();
  };
  std::vector<double> a, b;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CmaEs p(setup(DomainSpec::continuous(d), 300, seed), false);
    CmaEs r(setup(DomainSpec::continuous(d), 300, seed + 1000), false);
    drive(p, plain);
    drive(r, rotated);
    a.push_back(std::log10(plain(p.recommend().point)));
    b.push_back(std::log10(rotated(r.recommend().point)));
  }
  EXPECT_GT(rank_sum_p(a, b), 0.01);
}

// ---- Differential evolution

TEST(De, CrossoverAllMutant) {
  Rng rng(1);
  const Vector t = Vector::Constant(4, 9.0);
  const Vector a = Vector::Constant(4, 1.0), b = Vector::Constant(4, 3.0), c = Vector::Constant(4, 2.0);
  const Vector trial = de_trial(t, a, b, c, 0.5, 1.0, rng);
  EXPECT_TRUE(trial.isApprox(Vector(a + 0.5 * (b - c))));
  const Vector only_a = de_trial(t, a, b, c, 0.0, 1.0, rng);
  EXPECT_EQ(only_a, a);
}

TEST(De, CrossoverTakesAtLeastOneMutantCoordinate) {
  Rng rng(2);
  const Vector t = Vector::Zero(6);
  const Vector a = Vector::Ones(6);
  for (int i = 0; i < 200; ++i) {
    const Vector trial = de_trial(t, a, a, a, 0.8, 0.0, rng);
    EXPECT_EQ((trial.array() != 0.0).count(), 1);
  }
}

TEST(De, SelectionRule) {
  EXPECT_FALSE(de_accepts(3.0, 2.0));
  EXPECT_TRUE(de_accepts(2.0, 2.0));
  EXPECT_TRUE(de_accepts(1.0, 2.0));
}

TEST(De, ConfigErrors) {
  EXPECT_THROW(DifferentialEvolution(setup(DomainSpec::continuous(2), 10, 0), DeOptions{3, 0.8, 0.5, false}),
               ConfigError);
  EXPECT_THROW(DifferentialEvolution(setup(DomainSpec::continuous(2), 10, 0), DeOptions{10, 0.0, 0.5, false}),
               ConfigError);
}

TEST(De, SlotLossesNeverIncrease) {
  DifferentialEvolution de(setup(DomainSpec::continuous(4), 2000, 5), DeOptions{});
  std::vector<double> before;
  while (de.num_asks() < de.budget()) {
    const Candidate c = de.ask();
    de.tell(c, sphere(c.point));
    std::vector<double> now;
    for (const auto& s : de.population()) now.push_back(s.loss);
    if (!before.empty()) {
      for (std::size_t i = 0; i < now.size(); ++i) ASSERT_LE(now[i], before[i]);
    }
    before = now;
  }
  EXPECT_LT(sphere(de.recommend().point), 1e-3);
}

TEST(De, NormalQuantile) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.001), -3.090232306167813, 1e-9);
}

TEST(De, LatinHypercubeStratifiesInitialPopulation) {
  DifferentialEvolution de(setup(DomainSpec::continuous(3), 100, 7), DeOptions{30, 0.8, 0.5, true});
  for (Eigen::Index j = 0; j < 3; ++j) {
    std::vector<int> bins(30, 0);
    for (const auto& s : de.population()) {
      const double p = 0.5 * std::erfc(-s.x[j] / std::sqrt(2.0));
      ++bins[std::min(29, static_cast<int>(p * 30.0))];
    }
    for (int b : bins) EXPECT_EQ(b, 1);
  }
}

// ---- TBPSA

TEST(Tbpsa, EliteCenter) {
  TbpsaState state;
  state.lambda = 4;
  TbpsaOptions options;
  options.elite_fraction = 0.5;
  std::vector<TbpsaSample> gen{{Vector{{0.0, 0.0}}, 1.0, 1.0},
                               {Vector{{2.0, 0.0}}, 1.0, 2.0},
                               {Vector{{0.0, 2.0}}, 1.0, 3.0},
                               {Vector{{2.0, 2.0}}, 1.0, 4.0}};
  tbpsa_update(state, options, gen);
  EXPECT_EQ(state.center, (Vector{{1.0, 0.0}}));
}

TEST(Tbpsa, PopulationDoublesOnStagnation) {
  TbpsaState state;
  state.lambda = 4;
  TbpsaOptions options;
  auto gen = [] {
    return std::vector<TbpsaSample>{{Vector::Zero(1), 1.0, 1.0},
                                    {Vector::Zero(1), 1.0, 1.0},
                                    {Vector::Zero(1), 1.0, 1.0},
                                    {Vector::Zero(1), 1.0, 1.0}};
  };
  tbpsa_update(state, options, gen());
  EXPECT_EQ(state.lambda, 4u);
  tbpsa_update(state, options, gen());
  tbpsa_update(state, options, gen());
  EXPECT_EQ(state.lambda, 8u);
}

TEST(Tbpsa, NaiveRecommendsBestObservation) {
  Tbpsa t(setup(DomainSpec::continuous(2), 300, 3), TbpsaOptions{0.25, 5, 2, true});
  drive(t, sphere);
  const Point rec = t.recommend().point;
  double best = std::numeric_limits<double>::infinity();
  Point arg;
  for (CandidateId id = 0; id < t.archive_size(); ++id) {
    const double l = t.candidate(id).mean_loss();
    if (l < best) best = l, arg = t.candidate(id).point;
  }
  EXPECT_EQ(rec, arg);
}

TEST(Tbpsa, RecommendationInsideHullOfTold) {
  Tbpsa t(setup(DomainSpec::continuous(3), 500, 9, 1, true), TbpsaOptions{});
  drive(t, sphere);
  const Point rec = t.recommend().point;
  for (std::size_t j = 0; j < 3; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (CandidateId id = 0; id < t.archive_size(); ++id) {
      lo = std::min(lo, t.candidate(id).point[j]);
      hi = std::max(hi, t.candidate(id).point[j]);
    }
    EXPECT_GE(rec[j], lo);
    EXPECT_LE(rec[j], hi);
  }
}

TEST(Tbpsa, NoisyRecommendationDiffersFromBestObservation) {
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Tbpsa t(setup(DomainSpec::continuous(10), 5000, seed, 1, true), TbpsaOptions{});
    std::mt19937_64 noise(seed + 77);
    std::normal_distribution<double> n01;
    auto shifted = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += (v - 1.0) * (v - 1.0);
      return s;
    };
    drive(t, [&](std::span<const double> x) { return shifted(x) + n01(noise); });
    double best = std::numeric_limits<double>::infinity();
    Point arg;
    for (CandidateId id = 0; id < t.archive_size(); ++id) {
      const double l = t.candidate(id).mean_loss();
      if (l < best) best = l, arg = t.candidate(id).point;
    }
    if (shifted(t.recommend().point) != shifted(arg)) ++differ;
  }
  EXPECT_GT(differ, 18);
}

// ---- Local search

TEST(LocalSearch, QuadraticTrustRegionExactQuadratic) {
  const std::vector<Vector> pts{Vector{{0.0}}, Vector{{1.0}}, Vector{{2.0}}};
  const std::vector<double> losses{9.0, 4.0, 1.0};
  const Vector inf = Vector::Constant(1, std::numeric_limits<double>::infinity());
  const auto x = quadratic_tr_propose(pts, losses, 5.0, -inf, inf);
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR((*x)[0], 3.0, 1e-9);
}

TEST(LocalSearch, LinearTrustRegionClippedToBound) {
  const std::vector<Vector> pts{Vector{{0.0}}, Vector{{0.5}}};
  const std::vector<double> losses{0.0, 0.5};
  const auto x = linear_tr_propose(pts, losses, 1.0, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0], -1.0);
}

TEST(LocalSearch, PowellConvexQuadraticWithinThreeSweeps) {
  auto f = [](std::span<const double> x) {
    return 2.0 * x[0] * x[0] + x[0] * x[1] + 3.0 * x[1] * x[1];
  };
  LocalSearch powell(setup(DomainSpec::continuous(2), 10000, 0, 1, false, Point{5.0, 5.0}),
                     LocalSearchVariant::powell);
  drive(powell, f, [&] { return powell.sweeps() >= 3; });
  EXPECT_LT(powell.incumbent()->mean_loss(), 1e-8);
}

TEST(LocalSearch, PowellDirectionsStayFullRank) {
  auto rosen = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    }
    return s;
  };
  LocalSearch powell(setup(DomainSpec::continuous(4), 4000, 0), LocalSearchVariant::powell);
  std::int64_t seen = 0;
  drive(powell, rosen, [&] {
    if (powell.sweeps() != seen) {
      seen = powell.sweeps();
      Eigen::JacobiSVD<Matrix> svd(powell.directions());
      const auto& s = svd.singularValues();
      EXPECT_GT(s.minCoeff(), 0.0);
      EXPECT_TRUE(std::isfinite(s.maxCoeff() / s.minCoeff()));
    }
    return false;
  });
  EXPECT_GT(seen, 3);
  EXPECT_LT(powell.incumbent()->mean_loss(), 1e-3);
}

TEST(LocalSearch, TrustRegionsSolveSmoothProblems) {
  auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.5) * (x[i] - 0.5);
    return s;
  };
  for (auto variant : {LocalSearchVariant::linear_tr, LocalSearchVariant::quadratic_tr}) {
    LocalSearch ls(setup(DomainSpec::continuous(3), 600, 2), variant);
    drive(ls, f);
    EXPECT_LT(ls.incumbent()->mean_loss(), 1e-4) << static_cast<int>(variant);
    EXPECT_GT(ls.radius(), 0.0);
  }
}

TEST(LocalSearch, ParallelAsksServed) {
  for (auto variant :
       {LocalSearchVariant::powell, LocalSearchVariant::linear_tr, LocalSearchVariant::quadratic_tr}) {
    LocalSearch ls(setup(DomainSpec::continuous(3), 200, 2, 8), variant);
    FunctionObjective obj(DomainSpec::continuous(3), sphere);
    const RunResult r = run_loop(ls, obj);
    EXPECT_EQ(r.history.size(), 200u);
    EXPECT_LT(sphere(r.recommendation.point), 1.0);
  }
}

// ---- Meta-model

TEST(Metamodel, RecoversAnalyticMinimizer) {
  const int d = 3;
  Matrix A(d, d);
  A << 3, 1, 0, 1, 2, 0.5, 0, 0.5, 1;
  const Vector b{{1.0, -2.0, 0.5}};
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  std::vector<Vector> pts;
  std::vector<double> vals;
  for (int i = 0; i < 30; ++i) {
    Vector x = standard_normal(gen, d);
    pts.push_back(x);
    vals.push_back(x.dot(A * x) + b.dot(x) + 4.0);
  }
  const auto x = metamodel_propose(pts, vals);
  ASSERT_TRUE(x.has_value());
  const Vector expected = -0.5 * A.ldlt().solve(b);
  EXPECT_LT((*x - expected).norm(), 1e-6);
}

TEST(Metamodel, TooFewPoints) {
  std::vector<Vector> pts(3, Vector::Zero(5));
  std::vector<double> vals(3, 0.0);
  EXPECT_FALSE(metamodel_propose(pts, vals).has_value());
}

TEST(Metamodel, IndefiniteModelRejected) {
  std::mt19937_64 gen(6);
  std::vector<Vector> pts;
  std::vector<double> vals;
  for (int i = 0; i < 30; ++i) {
    Vector x = standard_normal(gen, 2);
    pts.push_back(x);
    vals.push_back(x[0] * x[0] - x[1] * x[1]);
  }
  EXPECT_FALSE(metamodel_propose(pts, vals).has_value());
}

TEST(Metamodel, WrapperInterleavesModelSteps) {
  MetamodelWrapper w(setup(DomainSpec::continuous(3), 300, 1),
                     std::make_unique<CmaEs>(setup(DomainSpec::continuous(3), 300, 2), false));
  drive(w, sphere);
  EXPECT_GT(w.model_proposals(), 0);
  EXPECT_LT(sphere(w.recommend().point), 1e-8);
}

// ---- One-shot recentering

TEST(Recentering, Sigma) {
  EXPECT_EQ(recentering_sigma(1000, 2), 1.0);
  EXPECT_NEAR(recentering_sigma(100, 100), 0.2148, 1e-4);
}

TEST(Recentering, AllAsksBeforeTells) {
  OneShotRecentering r(setup(DomainSpec::continuous(4), 50, 3, 50));
  std::vector<Candidate> cs;
  for (int i = 0; i < 50; ++i) cs.push_back(r.ask());
  double best = std::numeric_limits<double>::infinity();
  Point arg;
  for (const auto& c : cs) {
    const double l = sphere(c.point);
    r.tell(c, l);
    if (l < best) best = l, arg = c.point;
  }
  EXPECT_EQ(r.recommend().point, arg);
}

// ---- Domain membership under fuzzed boxes

TEST(Solvers, AskedPointsStayInFuzzedBoxes) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> w(0.01, 3.0);
  std::uniform_int_distribution<int> dims(1, 6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<VariableKind> kinds;
    const int d = dims(gen);
    for (int i = 0; i < d; ++i) {
      const double lo = u(gen);
      switch (gen() % 3) {
        case 0:
          kinds.emplace_back(Continuous{lo, lo + w(gen), w(gen)});
          break;
        case 1:
          kinds.emplace_back(Continuous{lo, std::nullopt, w(gen)});
          break;
        default:
          kinds.emplace_back(Continuous{std::nullopt, std::nullopt, w(gen)});
      }
    }
    const DomainSpec domain(kinds);
    const auto shifted = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += (v - 7.0) * (v - 7.0);
      return s;
    };
    std::vector<std::unique_ptr<Optimizer>> solvers;
    const auto s = [&](std::uint64_t seed) { return setup(domain, 150, seed, 3); };
    solvers.push_back(std::make_unique<OnePlusOneEs>(s(1)));
    solvers.push_back(std::make_unique<CmaEs>(s(2), false));
    solvers.push_back(std::make_unique<CmaEs>(s(3), true));
    solvers.push_back(std::make_unique<DifferentialEvolution>(s(4), DeOptions{}));
    solvers.push_back(std::make_unique<Tbpsa>(s(5), TbpsaOptions{}));
    solvers.push_back(std::make_unique<OneShotRecentering>(s(6)));
    solvers.push_back(std::make_unique<LocalSearch>(s(7), LocalSearchVariant::powell));
    solvers.push_back(std::make_unique<LocalSearch>(s(8), LocalSearchVariant::linear_tr));
    solvers.push_back(std::make_unique<LocalSearch>(s(9), LocalSearchVariant::quadratic_tr));
    solvers.push_back(std::make_unique<MetamodelWrapper>(s(10), std::make_unique<CmaEs>(s(11), false)));
    for (auto& opt : solvers) {
      FunctionObjective obj(domain, shifted);
      // ask() itself rejects points outside the domain.
      EXPECT_NO_THROW(run_loop(*opt, obj));
      EXPECT_TRUE(domain.contains(opt->recommend().point));
    }
  }
}

}  // namespace
}  // namespace optbench
