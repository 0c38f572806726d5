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

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "optbench/core/run_loop.hpp"
#include "optbench/wizard/registry.hpp"

namespace optbench {
namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += (v - 0.3) * (v - 0.3);
  return s;
}

RunContext context(DomainSpec domain, std::int64_t budget, std::int64_t workers = 1, std::uint64_t seed = 0) {
  return RunContext{std::move(domain), budget, workers, false, seed};
}

TEST(ChainBudgets, FloorThenRemainderToLast) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(chain_budgets(100, half), (std::vector<std::int64_t>{50, 50}));
  EXPECT_EQ(chain_budgets(101, half), (std::vector<std::int64_t>{50, 51}));
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(chain_budgets(10, thirds), (std::vector<std::int64_t>{3, 3, 4}));
}

TEST(ChainBudgets, AbsoluteAsksComeFirst) {
  const std::vector<double> half{0.5, 0.5};
  const std::vector<std::optional<std::int64_t>> asks{100, std::nullopt};
  EXPECT_EQ(chain_budgets(300, half, asks), (std::vector<std::int64_t>{100, 200}));
  EXPECT_EQ(chain_budgets(60, half, asks), (std::vector<std::int64_t>{60, 0}));
}

TEST(BetAndRun, SharesAndTies) {
  EXPECT_EQ(bet_and_run_shares(1000, 3, 0.2), (std::vector<std::int64_t>{68, 66, 66}));
  EXPECT_EQ(bet_and_run_survivor({3.0, 1.0, 2.0}), 1U);
  EXPECT_EQ(bet_and_run_survivor({1.0, 1.0, 1.0}), 0U);
  EXPECT_THROW(bet_and_run_shares(10, 3, 0.2), ConfigError);
}

TEST(BetAndRun, PhaseOneThenSurvivorOnly) {
  auto opt = build_optimizer(parse_spec("bet_and_run(cma,one-plus-one-es,de;0.2)"),
                             context(DomainSpec::continuous(3), 1000));
  auto& bet = dynamic_cast<BetAndRun&>(*opt);
  while (bet.num_asks() < bet.phase_budget()) {
    const Candidate c = bet.ask();
    bet.tell(c, sphere(c.point));
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(bet.child(i).num_asks(), bet.shares()[i]);
  EXPECT_FALSE(bet.survivor().has_value());
  const Candidate c = bet.ask();
  bet.tell(c, sphere(c.point));
  ASSERT_TRUE(bet.survivor().has_value());
  std::vector<double> best;
  for (std::size_t i = 0; i < 3; ++i) best.push_back(bet.child(i).incumbent()->mean_loss());
  EXPECT_EQ(*bet.survivor(), bet_and_run_survivor(best));
  while (bet.num_asks() < bet.budget()) {
    const Candidate n = bet.ask();
    bet.tell(n, sphere(n.point));
  }
  const std::size_t s = *bet.survivor();
  EXPECT_EQ(bet.child(s).num_asks(), bet.shares()[s] + 800);
}

TEST(BetAndRun, IdenticalChildrenSplitFairlyAndChildZeroSurvives) {
  const RunContext ctx = context(DomainSpec::continuous(3), 300);
  ChildFactory same = [](std::size_t, RunContext c, std::optional<Point> start) -> std::unique_ptr<Optimizer> {
    return std::make_unique<CmaEs>(SolverSetup{std::move(c), 11, std::move(start)}, false);
  };
  BetAndRun bet(SolverSetup{ctx, 1, std::nullopt}, 3, 0.3, same);
  FunctionObjective f(ctx.domain, sphere);
  run_loop(bet, f);
  EXPECT_EQ(bet.shares(), (std::vector<std::int64_t>{30, 30, 30}));
  ASSERT_TRUE(bet.survivor().has_value());
  EXPECT_EQ(*bet.survivor(), 0U);
}

TEST(Progressive, ActiveSchedule) {
  EXPECT_EQ(progressive_active(0, 10, 100), 1U);
  EXPECT_EQ(progressive_active(71, 10, 100), 9U);
  EXPECT_EQ(progressive_active(72, 10, 100), 10U);
  EXPECT_EQ(progressive_active(99, 10, 100), 10U);
  EXPECT_EQ(progressive_active(5, 1, 100), 1U);
}

TEST(Progressive, PinnedCoordinatesStayAtCenter) {
  const DomainSpec dom = DomainSpec::box(10, -1.0, 3.0);
  auto opt = build_optimizer(parse_spec("progressive(cma)"), context(dom, 100));
  auto& pw = dynamic_cast<ProgressiveWidening&>(*opt);
  while (pw.num_asks() < pw.budget()) {
    const std::size_t active = progressive_active(pw.num_asks(), 10, 100);
    const Candidate c = pw.ask();
    EXPECT_EQ(pw.active(), active);
    for (std::size_t i = active; i < 10; ++i) EXPECT_EQ(c.point[i], 1.0);
    pw.tell(c, sphere(c.point));
  }
  EXPECT_EQ(pw.active(), 10U);
  EXPECT_EQ(pw.generations(), 10U);
}

TEST(Chain, FirstSubBudgetComesFromChildZero) {
  auto opt = build_optimizer(parse_spec("chain(cma,powell)"), context(DomainSpec::continuous(4), 200));
  auto& chain = dynamic_cast<Chain&>(*opt);
  for (int i = 0; i < 100; ++i) {
    const Candidate c = chain.ask();
    chain.tell(c, sphere(c.point));
    EXPECT_EQ(chain.children_started(), 1U);
    EXPECT_EQ(chain.child(0).num_asks(), i + 1);
  }
  const Candidate c = chain.ask();
  EXPECT_EQ(chain.children_started(), 2U);
  EXPECT_EQ(chain.child(1).num_asks(), 1);
  chain.tell(c, sphere(c.point));
}

TEST(Chain, HandoffStartsFromIncumbent) {
  for (const char* text : {"chain(cma,powell)", "chain(de,one-plus-one-es,linear-tr;0.2,0.3,0.5)",
                           "chain(diagonal-cma[asks=100],metamodel(cma))"}) {
    auto opt = build_optimizer(parse_spec(text), context(DomainSpec::continuous(3), 400, 1, 7));
    auto& chain = dynamic_cast<Chain&>(*opt);
    while (chain.num_asks() < chain.budget()) {
      const std::size_t before = chain.children_started();
      const std::optional<Point> best =
          chain.incumbent() ? std::optional<Point>(chain.incumbent()->point) : std::nullopt;
      const Candidate c = chain.ask();
      if (chain.children_started() > before && before > 0) {
        EXPECT_EQ(chain.child_start(before), best) << text;
      }
      chain.tell(c, sphere(c.point));
    }
    EXPECT_EQ(chain.children_started(), chain.budgets().size()) << text;
  }
}

TEST(Chain, RecommendationNeverWorseAcrossBoundaries) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto opt = build_optimizer(parse_spec("chain(cma,recentering,one-plus-one-es)"),
                               context(DomainSpec::continuous(5), 300, 1, seed));
    auto& chain = dynamic_cast<Chain&>(*opt);
    double incumbent = std::numeric_limits<double>::infinity();
    double at_boundary = std::numeric_limits<double>::infinity();
    std::size_t started = 0;
    while (chain.num_asks() < chain.budget()) {
      const Candidate c = chain.ask();
      if (chain.children_started() != started) {
        started = chain.children_started();
        at_boundary = incumbent;
      }
      chain.tell(c, sphere(c.point));
      const double now = chain.incumbent()->mean_loss();
      EXPECT_LE(now, incumbent);
      incumbent = now;
      EXPECT_LE(sphere(chain.recommend().point), at_boundary);
    }
  }
}

TEST(Chain, UnknownIdIsRegistryError) {
  EXPECT_THROW(build_optimizer(parse_spec("chain(cma,nonexistent)"), context(DomainSpec::continuous(2), 10)),
               RegistryError);
}

// Random spec trees over continuous solvers with random budgets and worker
// counts. The root hands out exactly its budget and the run loop never
// trips a budget or contract error.
AlgorithmSpec random_tree(std::mt19937_64& rng, int depth) {
  static const std::vector<std::string> leaves{"cma",    "diagonal-cma", "de",          "lhs-de",
                                               "tbpsa",  "naive-tbpsa",  "powell",      "linear-tr",
                                               "quadratic-tr", "one-plus-one-es", "recentering", "abbo"};
  std::uniform_int_distribution<int> pick(0, depth > 2 ? 0 : 4);
  switch (pick(rng)) {
    case 1: {
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      std::vector<AlgorithmSpec> kids;
      std::vector<double> fr;
      for (int i = 0; i < n; ++i) {
        kids.push_back(random_tree(rng, depth + 1));
        fr.push_back(1.0 / n);
      }
      if (std::bernoulli_distribution(0.3)(rng) && kids[0].kind == SpecKind::leaf) {
        kids[0].params["asks"] = std::to_string(std::uniform_int_distribution<int>(0, 50)(rng));
      }
      AlgorithmSpec s;
      s.kind = SpecKind::chain;
      s.children = std::move(kids);
      s.fractions = std::move(fr);
      return s;
    }
    case 2:
      // A phase-1 share of zero is a configuration error, so bets only sit
      // at the root where the budget is large enough.
      if (depth > 0) return AlgorithmSpec::leaf("cma");
      return AlgorithmSpec::bet_and_run({random_tree(rng, depth + 1), random_tree(rng, depth + 1)}, 0.5);
    case 3:
      return AlgorithmSpec::wrapped(WrapKind::metamodel, random_tree(rng, depth + 1));
    case 4:
      return AlgorithmSpec::wrapped(WrapKind::progressive, random_tree(rng, depth + 1));
    default:
      return AlgorithmSpec::leaf(leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)]);
  }
}

TEST(Combinators, BudgetConservationOverRandomTrees) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 150; ++trial) {
    const AlgorithmSpec spec = random_tree(rng, 0);
    const auto d = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const auto b = std::uniform_int_distribution<std::int64_t>(8, 300)(rng);
    const auto w = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
    auto opt = build_optimizer(spec, context(DomainSpec::box(d, -5.0, 5.0), b, w, trial));
    FunctionObjective f(DomainSpec::box(d, -5.0, 5.0), sphere);
    const RunResult r = run_loop(*opt, f);
    EXPECT_EQ(opt->num_asks(), b) << spec.to_string();
    EXPECT_EQ(opt->num_tells(), b) << spec.to_string();
    EXPECT_EQ(static_cast<std::int64_t>(r.history.size()), b) << spec.to_string();
    EXPECT_TRUE(f.domain().contains(opt->recommend().point)) << spec.to_string();
  }
}

TEST(Spec, ParsePrintRoundTrip) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"cma", "cma"},
      {"chain(cma,powell)", "chain(cma,powell;0.5,0.5)"},
      {"chain(diagonal-cma[asks=100],metamodel(cma);0.5,0.5)",
       "chain(diagonal-cma[asks=100],metamodel(cma);0.5,0.5)"},
      {"bet_and_run(cma,de,tbpsa;0.2)", "bet_and_run(cma,de,tbpsa;0.2)"},
      {"softmax(chain(cma,powell;0.25,0.75))", "softmax(chain(cma,powell;0.25,0.75))"},
      {"progressive(de)", "progressive(de)"},
      {"x[b=2,a=1]", "x[a=1,b=2]"},
  };
  for (const auto& [in, canonical] : cases) {
    const AlgorithmSpec s = parse_spec(in);
    EXPECT_EQ(s.to_string(), canonical);
    EXPECT_EQ(parse_spec(s.to_string()), s);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const AlgorithmSpec s = random_tree(rng, 0);
    EXPECT_EQ(parse_spec(s.to_string()), s) << s.to_string();
  }
}

TEST(Spec, Errors) {
  for (const char* bad : {"", "chain(cma;0.3,0.3)", "chain(cma,de;0.5)", "bet_and_run(cma;0.5)",
                          "bet_and_run(cma,de;1.5)", "metamodel(cma", "cma[asks]", "cma)", "chain(cma,de;0,1)"}) {
    EXPECT_THROW(parse_spec(bad), ParseError) << bad;
  }
  EXPECT_EQ(parse_spec_list("cma,chain(cma,powell),de").size(), 3U);
}

}  // namespace
}  // namespace optbench
