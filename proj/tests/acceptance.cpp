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

// Acceptance checks, one PASS/FAIL line each. Exits non-zero when any
// check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "optbench/harness/experiment.hpp"
#include "optbench/harness/report.hpp"
#include "optbench/solvers/discrete.hpp"
#include "optbench/solvers/quadratic_model.hpp"
#include "optbench/solvers/tbpsa.hpp"

namespace {

using namespace optbench;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int number, const char* name, double limit_s, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    out.pass = false;
    out.detail += "; over the time limit";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", number, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

bench::FunctionSpec continuous_spec(bench::BaseFunction f, std::size_t d, std::uint64_t seed, bool rotate = false,
                                    double noise = 0.0) {
  bench::FunctionSpec s;
  s.base = f;
  s.d = d;
  s.transform.translation_std = 1.0;
  s.transform.rotate = rotate;
  s.transform.noise_std = noise;
  s.transform.transform_seed = seed;
  return s;
}

// Final regret of `algorithm` on the instance drawn from `seed`.
double final_regret(const std::string& algorithm, const bench::FunctionSpec& spec, std::int64_t budget,
                    std::uint64_t seed) {
  auto f = bench::make_function(spec, derive_seed(seed, {"noise"}));
  RunContext ctx{f->domain(), budget, 1, f->noisy(), derive_seed(seed, {"solver", algorithm})};
  auto opt = build_optimizer(algorithm, ctx);
  const auto r = run_loop(*opt, *f);
  return f->noise_free(r.recommendation.point) - *f->known_minimum();
}

Outcome wizard_dispatch() {
  auto pick = [](const char* t) { return select_algorithm(SelectionContext::parse(t)).to_string(); };
  const std::vector<std::pair<const char*, const char*>> examples{
      {"d=20,b=1000,w=600", "recentering"},
      {"d=3,b=80,w=20", "diagonal-cma"},
      {"d=10,b=10000,w=1", "chain(cma,powell;0.5,0.5)"},
      {"d=50,b=600,w=1", "one-plus-one-es"},
      {"d=4,b=100,w=1", "metamodel(cma)"},
      {"d=10,b=200,w=1", "linear-tr"},
      {"d=200,b=10,noisy=true", "progressive(de)"},
      {"d=200,b=1000,noisy=true", "progressive(de)"},
      {"d=200,b=100000,noisy=true", "progressive(de)"},
      {"d=50,b=500,noisy=true", "quadratic-tr"},
      {"d=30,b=300,all_discrete=true,max_arity=2", "linear-decay-one-plus-one"},
  };
  int exact = 0;
  for (const auto& [ctx, want] : examples) exact += pick(ctx) == std::string(want);
  const auto cat = select_algorithm(SelectionContext::parse("d=10,b=1000,all_discrete=true,has_categorical=true,max_arity=10"));
  exact += cat.kind == SpecKind::wrap && cat.wrap == WrapKind::softmax;
  const int total = static_cast<int>(examples.size()) + 1;

  const char* reach[] = {
      "d=5,b=100,noisy=true,has_categorical=true,max_arity=3", "d=5,b=100,all_discrete=true,max_arity=4",
      "d=5,b=100,w=4,all_discrete=true,max_arity=4",          "d=5,b=100,has_categorical=true,max_arity=7",
      "d=5,b=100,has_unbounded_discrete=true,max_arity=inf",  "d=101,b=100,noisy=true",
      "d=30,b=100,noisy=true",                                "d=31,b=101,noisy=true",
      "d=31,b=100,noisy=true",                                "d=20,b=10,w=1",
      "d=4,b=99,w=20",                                        "d=4,b=499,w=100",
      "d=5,b=100,w=21",                                       "d=8,b=6001",
      "d=31,b=929",                                           "d=4,b=119",
      "d=10,b=299",                                           "d=10,b=300"};
  std::set<int> rules;
  for (const char* c : reach) rules.insert(select_with_rule(SelectionContext::parse(c)).rule);
  int covered = 0;
  for (int r = 1; r <= 17; ++r) covered += rules.count(r) > 0;
  return {exact == total && covered == 17,
          std::to_string(exact) + "/" + std::to_string(total) + " examples exact, " + std::to_string(covered) +
              "/17 rules reached"};
}

Outcome ordering() {
  const auto a = select_with_rule(SelectionContext::parse("d=25,b=1000,noisy=true"));
  const auto b = select_with_rule(SelectionContext::parse("d=50,b=500,noisy=true"));
  const bool ok = a.spec.to_string() == "tbpsa" && b.spec.to_string() == "quadratic-tr";
  return {ok, "(noisy,25,1000) -> rule " + std::to_string(a.rule) + " " + a.spec.to_string() +
                  "; (noisy,50,500) -> rule " + std::to_string(b.rule) + " " + b.spec.to_string()};
}

Outcome es_sphere() {
  std::vector<double> regrets;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    regrets.push_back(final_regret("one-plus-one-es", continuous_spec(bench::BaseFunction::sphere, 10, seed), 3000, seed));
  }
  const double m = median(regrets);
  return {m < 1e-8, "median regret " + fmt(m)};
}

Outcome cma_vs_es() {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = continuous_spec(bench::BaseFunction::ellipsoid, 10, 100 + seed, true);
    wins += final_regret("cma", spec, 10000, seed) < final_regret("one-plus-one-es", spec, 10000, seed);
  }
  return {wins >= 16, "CMA lower in " + std::to_string(wins) + "/20 seeds"};
}

Outcome chaining() {
  int ok = 0;
  std::vector<double> chain, cma;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = continuous_spec(bench::BaseFunction::cigar, 10, 200 + seed);
    chain.push_back(final_regret("chain(cma,powell;0.5,0.5)", spec, 8000, seed));
    cma.push_back(final_regret("cma", spec, 8000, seed));
    ok += chain.back() <= cma.back();
  }
  return {ok >= 10, "chain <= cma in " + std::to_string(ok) + "/20 seeds; medians " + fmt(median(chain)) + " vs " +
                        fmt(median(cma))};
}

Outcome ask_vs_recommend() {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = bench::make_function(continuous_spec(bench::BaseFunction::sphere, 10, 300 + seed, false, 1.0),
                                  derive_seed(seed, {"noise"}));
    Tbpsa t(SolverSetup{RunContext{f->domain(), 5000, 1, true, 0}, seed, std::nullopt}, TbpsaOptions{});
    const auto r = run_loop(t, *f);
    double best = std::numeric_limits<double>::infinity();
    Point naive;
    for (CandidateId id = 0; id < t.archive_size(); ++id) {
      if (t.candidate(id).mean_loss() < best) best = t.candidate(id).mean_loss(), naive = t.candidate(id).point;
    }
    wins += f->noise_free(r.recommendation.point) < f->noise_free(naive);
  }
  return {wins >= 14, "TBPSA recommendation better in " + std::to_string(wins) + "/20 seeds"};
}

Outcome onemax() {
  int hits = 0;
  std::vector<double> hitting;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DiscreteOnePlusOne ea(SolverSetup{RunContext{DomainSpec::binary(20), 2000, 1, false, 0}, seed, std::nullopt},
                          DiscreteVariant::fixed);
    FunctionObjective f(DomainSpec::binary(20), [](std::span<const double> x) { return bench::fn::onemax(x); });
    std::int64_t hit = -1;
    run_loop(ea, f, [&](const Optimizer& o, std::int64_t done) {
      if (hit < 0 && o.incumbent() && o.incumbent()->mean_loss() == 0.0) hit = done;
    });
    if (hit >= 0) {
      ++hits;
      hitting.push_back(static_cast<double>(hit));
    }
  }
  const double mean = hitting.empty() ? 0.0 : std::accumulate(hitting.begin(), hitting.end(), 0.0) / hitting.size();
  return {hits >= 95, std::to_string(hits) + "/100 solved, mean hitting time " + fmt(mean) + " (e d ln d = " +
                          fmt(std::exp(1.0) * 20 * std::log(20.0)) + ")"};
}

Outcome metamodel() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  int count = 0;
  for (int d : {2, 5, 10}) {
    for (int trial = 0; trial < (d == 10 ? 18 : 16); ++trial, ++count) {
      Matrix B(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) B(i, j) = n01(rng);
      }
      const Matrix A = B * B.transpose() + 0.5 * Matrix::Identity(d, d);
      Vector b(d);
      for (int i = 0; i < d; ++i) b[i] = n01(rng);
      const Vector xstar = -0.5 * A.ldlt().solve(b);
      std::vector<Vector> pts;
      std::vector<double> vals;
      const std::size_t k = quadratic_parameter_count(static_cast<std::size_t>(d), QuadraticForm::full);
      for (std::size_t i = 0; i < 2 * k; ++i) {
        Vector x(d);
        for (int j = 0; j < d; ++j) x[j] = xstar[j] + n01(rng);
        pts.push_back(x);
        vals.push_back(x.dot(A * x) + b.dot(x) + 1.0);
      }
      const auto got = metamodel_propose(pts, vals);
      worst = std::max(worst, got ? (*got - xstar).norm() : std::numeric_limits<double>::infinity());
    }
  }
  return {count == 50 && worst < 1e-6, std::to_string(count) + " quadratics, worst error " + fmt(worst)};
}

Outcome reporting_math() {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> na(2, 5), np(1, 6), ns(1, 4), level(0, 5);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<harness::ExperimentRecord> rs;
    const int algos = na(rng), problems = np(rng), seeds = ns(rng);
    for (int p = 0; p < problems; ++p) {
      for (int a = 0; a < algos; ++a) {
        for (int s = 0; s < seeds; ++s) {
          harness::ExperimentRecord r;
          r.suite = "fuzz";
          r.problem = "p" + std::to_string(p);
          r.budget = 10;
          r.algorithm = "a" + std::to_string(a);
          r.seed = static_cast<std::uint64_t>(s);
          r.checkpoints = {{10, std::pow(10.0, level(rng) - 3)}};
          rs.push_back(r);
        }
      }
    }
    const auto h = harness::winning_rate_heatmap(rs);
    for (std::size_t i = 0; i < h.algorithms.size(); ++i) {
      violations += h.rate[i][i] != 0.5;
      for (std::size_t j = 0; j < h.algorithms.size(); ++j) {
        violations += std::abs(h.rate[i][j] + h.rate[j][i] - 1.0) > 1e-12;
        violations += !(h.rate[i][j] >= 0.0 && h.rate[i][j] <= 1.0);
      }
    }
    for (const auto& c : harness::compute_curves(rs)) violations += !(c.mean >= 0.0 && c.mean <= 1.0);
    auto moved = rs;
    for (auto& r : moved) r.checkpoints.back().regret = 7.0 * std::sqrt(r.checkpoints.back().regret) - 2.0;
    const auto g = harness::winning_rate_heatmap(moved);
    violations += g.algorithms != h.algorithms || g.rate != h.rate;
  }
  return {violations == 0, "1000 record sets, " + std::to_string(violations) + " violations"};
}

Outcome competitiveness() {
  const std::vector<std::string> algos{"abbo", "cma", "de", "one-plus-one-es", "tbpsa", "powell"};
  auto plan = harness::plan_for(bench::yabbob_lite(), algos, {0, 1, 2, 3, 4}, 2026);
  const auto records = harness::run_experiment(plan);
  int failed = 0;
  for (const auto& r : records) failed += r.failed;
  const auto h = harness::winning_rate_heatmap(records);
  std::string ranking;
  std::size_t place = h.algorithms.size();
  for (std::size_t i = 0; i < h.algorithms.size(); ++i) {
    ranking += (i ? ", " : "") + h.algorithms[i] + " " + fmt(h.score[i]);
    if (h.algorithms[i] == "abbo") place = i + 1;
  }
  return {failed == 0 && place <= 2, std::to_string(records.size()) + " cells, abbo ranks " + std::to_string(place) +
                                         " [" + ranking + "]"};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_reproducible() {
  const auto dir = std::filesystem::temp_directory_path() / "optbench_acceptance_cli";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto suite = bench::noisy_lite();
  suite.name = "repro";
  suite.problems.resize(4);
  for (auto& p : suite.problems) p.budgets = {300};
  { std::ofstream(dir / "suite.json") << bench::write_manifest(suite); }
  const std::string base = std::string(OPTBENCH_CLI) + " run --suite " + (dir / "suite.json").string() +
                           " --algs abbo,cma,tbpsa --seeds 0..2 --master-seed 5 --out ";
  const int a = std::system((base + (dir / "a").string() + " --workers 1 > /dev/null").c_str());
  const int b = std::system((base + (dir / "b").string() + " --workers 3 > /dev/null").c_str());
  const std::string ra = read_file(dir / "a" / "records.jsonl");
  const std::string rb = read_file(dir / "b" / "records.jsonl");
  const bool same = !ra.empty() && ra == rb;
  const auto lines = std::count(ra.begin(), ra.end(), '\n');
  std::filesystem::remove_all(dir);
  return {a == 0 && b == 0 && same, std::to_string(lines) + " records, " + (same ? "byte-identical" : "different")};
}

Outcome tsp_decode() {
  auto g = bench::make_function(bench::simple_tsp(6, 31));
  const auto& cities = g->cities();
  std::vector<std::size_t> rest{1, 2, 3, 4, 5};
  std::vector<double> lengths;
  do {
    std::vector<std::size_t> tour{0};
    tour.insert(tour.end(), rest.begin(), rest.end());
    double len = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& p = cities[tour[i]];
      const auto& q = cities[tour[(i + 1) % 6]];
      len += std::hypot(p[0] - q[0], p[1] - q[1]);
    }
    lengths.push_back(len);
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::mt19937_64 rng(32);
  int missing = 0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    std::vector<double> x(6);
    for (int k = 0; k < 6; ++k) x[k] = std::uniform_int_distribution<int>(0, 5 - k)(rng);
    const double loss = g->noise_free(x);
    missing += std::none_of(lengths.begin(), lengths.end(), [&](double l) { return std::abs(l - loss) < 1e-9; });
  }
  return {missing == 0, std::to_string(samples) + " encodings, " + std::to_string(missing) + " losses outside the " +
                            std::to_string(lengths.size()) + " enumerated tours"};
}

}  // namespace

int main() {
  report(1, "wizard dispatch", 1.0, wizard_dispatch);
  report(2, "first-match ordering", 1.0, ordering);
  report(3, "(1+1)-ES on translated sphere", 2.0, es_sphere);
  report(4, "CMA vs (1+1)-ES on rotated ellipsoid", 30.0, cma_vs_es);
  report(5, "chain(cma,powell) vs cma on cigar", 60.0, chaining);
  report(6, "TBPSA recommendation vs best observation", 60.0, ask_vs_recommend);
  report(7, "fixed-rate (1+1) EA on OneMax", 10.0, onemax);
  report(8, "meta-model quadratic recovery", 5.0, metamodel);
  report(9, "reporting math", 0.0, reporting_math);
  report(10, "abbo competitiveness on yabbob_lite", 1800.0, competitiveness);
  report(11, "CLI reproducibility", 0.0, cli_reproducible);
  report(12, "SimpleTSP decode soundness", 1.0, tsp_decode);
  return failures == 0 ? 0 : 1;
}
