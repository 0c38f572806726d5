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

// Runs (problem, budget, workers, algorithm, seed) cells. Every random
// stream of a cell is derived from the master seed and the cell labels, so
// records do not depend on the thread count or the execution order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "optbench/bench/suites.hpp"
#include "optbench/core/run_loop.hpp"
#include "optbench/harness/records.hpp"
#include "optbench/wizard/registry.hpp"

namespace optbench::harness {

/// {ceil(b / 2^k) : k >= 0} in ascending order; always ends at b.
inline std::vector<std::int64_t> checkpoint_grid(std::int64_t budget) {
  std::vector<std::int64_t> grid;
  for (std::int64_t v = budget;; v = (v + 1) / 2) {
    grid.push_back(v);
    if (v == 1) break;
  }
  std::reverse(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// Builds the objective for one (problem, seed) instance.
using InstanceFactory = std::function<std::unique_ptr<Evaluable>(std::uint64_t instance_seed, std::uint64_t noise_seed)>;

struct ProblemEntry {
  std::string id;
  InstanceFactory make;
  std::vector<std::int64_t> budgets;
  std::vector<std::int64_t> workers{1};
};

struct ExperimentPlan {
  std::string suite;
  std::vector<ProblemEntry> problems;
  std::vector<std::string> algorithms;
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline ProblemEntry entry_for(const bench::SuiteProblem& p) {
  return ProblemEntry{p.id,
                      [spec = p.function](std::uint64_t instance_seed, std::uint64_t noise_seed) {
                        auto s = spec;
                        s.transform.transform_seed = instance_seed;
                        return std::make_unique<bench::BenchFunction>(std::move(s), noise_seed);
                      },
                      p.budgets, p.workers};
}

inline ExperimentPlan plan_for(const bench::BenchmarkSuite& suite, std::vector<std::string> algorithms,
                               std::vector<std::uint64_t> seeds, std::uint64_t master_seed, unsigned threads = 0) {
  suite.validate();
  ExperimentPlan plan{suite.name, {}, std::move(algorithms), std::move(seeds), master_seed, threads};
  for (const auto& p : suite.problems) plan.problems.push_back(entry_for(p));
  return plan;
}

struct CellId {
  const ProblemEntry* problem = nullptr;
  std::int64_t budget = 0;
  std::int64_t workers = 1;
  std::string algorithm;
  std::uint64_t seed = 0;
};

/// Runs one cell. Failures inside the run are caught and reported in the
/// record; the error text is part of the record.
inline ExperimentRecord run_cell(const std::string& suite, const CellId& cell, std::uint64_t master_seed) {
  ExperimentRecord r;
  r.suite = suite;
  r.problem = cell.problem->id;
  r.budget = cell.budget;
  r.workers = cell.workers;
  r.algorithm = cell.algorithm;
  r.seed = cell.seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    const std::uint64_t instance = derive_seed(master_seed, {suite, r.problem, "instance", r.seed});
    const std::uint64_t noise = derive_seed(instance, {"noise"});
    auto function = cell.problem->make(instance, noise);
    RunContext ctx{function->domain(), r.budget, r.workers, function->noisy(),
                   derive_seed(master_seed, {suite, r.problem, r.budget, r.workers, r.algorithm, r.seed})};
    auto optimizer = build_optimizer(r.algorithm, ctx);
    const auto grid = checkpoint_grid(r.budget);
    const auto minimum = function->known_minimum();
    std::size_t next = 0;
    run_loop(*optimizer, *function, [&](const Optimizer& opt, std::int64_t done) {
      if (next >= grid.size() || done != grid[next]) return;
      const double value = function->noise_free(opt.recommend().point);
      const double regret = minimum ? value - *minimum : value;
      if (!std::isfinite(regret)) throw EvaluationError("non-finite regret at checkpoint");
      r.checkpoints.push_back(Checkpoint{done, regret});
      ++next;
    });
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
    r.checkpoints.clear();
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

/// Enumerates cells in problem, budget, workers, algorithm, seed order.
inline std::vector<CellId> enumerate_cells(const ExperimentPlan& plan) {
  std::vector<CellId> cells;
  for (const auto& p : plan.problems) {
    for (auto b : p.budgets) {
      for (auto w : p.workers) {
        for (const auto& a : plan.algorithms) {
          for (auto s : plan.seeds) cells.push_back(CellId{&p, b, w, a, s});
        }
      }
    }
  }
  return cells;
}

/// Rejects the plan before any cell runs: unknown solver ids, malformed
/// specs, empty seed or algorithm lists.
inline void validate_plan(const ExperimentPlan& plan) {
  if (plan.problems.empty()) throw ConfigError("experiment without problems");
  if (plan.algorithms.empty()) throw ConfigError("experiment without algorithms");
  if (plan.seeds.empty()) throw ConfigError("experiment without seeds");
  for (const auto& a : plan.algorithms) check_spec(parse_spec(a));
  for (const auto& p : plan.problems) {
    for (auto b : p.budgets) {
      if (b < 1) throw ConfigError("problem " + p.id + " has a non-positive budget");
      for (auto w : p.workers) {
        if (w < 1 || w > b) throw ConfigError("problem " + p.id + " has workers outside [1, budget]");
      }
    }
  }
}

/// Runs every cell on a pool of threads. Records come back in
/// enumeration order whatever the scheduling.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  const auto cells = enumerate_cells(plan);
  std::vector<ExperimentRecord> records(cells.size());
  unsigned threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) records[i] = run_cell(plan.suite, cells[i], plan.master_seed);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  pool.clear();
  return records;
}

}  // namespace optbench::harness
