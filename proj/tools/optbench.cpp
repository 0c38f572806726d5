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

// optbench command-line front end.
//
//   optbench run --suite yabbob_lite --algs abbo,cma --seeds 0..4 --workers 8 --out runs/a
//   optbench report --in runs/a --heatmap --ranking
//   optbench explain --ctx d=10,b=1000,w=1
//   optbench eval-server --cmd ./sim --algs abbo --budget 200 --out runs/b
//   optbench manifest --suite noisy_lite
//   optbench suites
//
// Exit codes: 0 success, 1 some cells failed, 2 invalid input.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optbench/harness/experiment.hpp"
#include "optbench/harness/external.hpp"
#include "optbench/harness/report.hpp"

namespace {

using namespace optbench;

/// "n" is seeds 0..n-1, "a..b" is the inclusive range.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  try {
    std::size_t used = 0;
    if (auto dots = text.find(".."); dots != std::string::npos) {
      const auto a = std::stoull(text.substr(0, dots), &used);
      if (used != dots) throw ParseError("bad seed range");
      const auto rest = text.substr(dots + 2);
      const auto b = std::stoull(rest, &used);
      if (used != rest.size() || b < a) throw ParseError("bad seed range");
      std::vector<std::uint64_t> out;
      for (auto s = a; s <= b; ++s) out.push_back(s);
      return out;
    }
    const auto n = std::stoull(text, &used);
    if (used != text.size() || n == 0) throw ParseError("bad seed count");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < n; ++s) out.push_back(s);
    return out;
  } catch (const std::logic_error&) {
    throw ParseError("seeds must be a count or a range a..b, got '" + text + "'");
  }
}

std::vector<std::string> parse_algorithms(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& spec : parse_spec_list(text)) out.push_back(spec.to_string());
  return out;
}

std::uint64_t resolve_master_seed(const CLI::Option* given, std::uint64_t value) {
  if (given->count() > 0) return value;
  if (const char* env = std::getenv("OPTBENCH_MASTER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw ConfigError("OPTBENCH_MASTER_SEED is not an unsigned integer");
    }
  }
  return 0;
}

int finish(const std::vector<harness::ExperimentRecord>& records, const std::string& out) {
  harness::emit_reports(records, out);
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.failed) continue;
    ++failed;
    std::cerr << "failed: " << r.problem << " b=" << r.budget << " w=" << r.workers << " " << r.algorithm
              << " seed=" << r.seed << ": " << r.error << "\n";
  }
  std::cout << records.size() - failed << " of " << records.size() << " cells completed; reports in " << out << "\n";
  return failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algorithm selection and benchmarking for black-box optimization"};
  app.require_subcommand(1);

  std::string suite, algs = "abbo", seeds = "1", out, in, ctx, cmd;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;
  std::int64_t budget = 0, workers = 1;

  auto* run = app.add_subcommand("run", "run a benchmark suite");
  run->add_option("--suite", suite, "suite name or manifest path")->required();
  run->add_option("--algs", algs, "comma-separated algorithm specs");
  run->add_option("--seeds", seeds, "seed count n or inclusive range a..b");
  auto* run_master = run->add_option("--master-seed", master_seed, "master seed (default $OPTBENCH_MASTER_SEED or 0)");
  run->add_option("--workers", threads, "cells run concurrently, 0 for all cores");
  run->add_option("--out", out, "output directory")->required();

  auto* report = app.add_subcommand("report", "recompute reports from records.jsonl");
  report->add_option("--in", in, "directory holding records.jsonl")->required();
  report->add_option("--out", out, "output directory (default: --in)");
  bool show_curves = false, show_heatmap = false, show_ranking = false;
  report->add_flag("--curves", show_curves, "print curves.csv");
  report->add_flag("--heatmap", show_heatmap, "print heatmap.csv");
  report->add_flag("--ranking", show_ranking, "print ranking.txt (the default)");

  auto* explain_cmd = app.add_subcommand("explain", "show the wizard's choice for a context");
  explain_cmd->add_option("--ctx", ctx, "e.g. d=10,b=1000,w=1,noisy=false")->required();

  auto* server = app.add_subcommand("eval-server", "optimize an external evaluator process");
  server->add_option("--cmd", cmd, "command started under /bin/sh -c")->required();
  server->add_option("--algs", algs, "comma-separated algorithm specs");
  server->add_option("--budget", budget, "evaluation budget")->required();
  server->add_option("--batch", workers, "asks evaluated per wave");
  server->add_option("--seeds", seeds, "seed count n or inclusive range a..b");
  auto* server_master = server->add_option("--master-seed", master_seed, "master seed");
  server->add_option("--workers", threads, "cells run concurrently, 0 for all cores");
  server->add_option("--out", out, "output directory")->required();

  auto* manifest = app.add_subcommand("manifest", "print a suite manifest");
  manifest->add_option("--suite", suite, "suite name or manifest path")->required();

  auto* suites = app.add_subcommand("suites", "list the shipped suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto plan = harness::plan_for(bench::load_suite(suite), parse_algorithms(algs), parse_seeds(seeds),
                                    resolve_master_seed(run_master, master_seed), threads);
      return finish(harness::run_experiment(plan), out);
    }
    if (*report) {
      const std::filesystem::path dir = out.empty() ? in : out;
      harness::emit_reports(harness::load_records(in), dir);
      if (!show_curves && !show_heatmap) show_ranking = true;
      if (show_curves) std::cout << harness::read_text(dir / "curves.csv");
      if (show_heatmap) std::cout << harness::read_text(dir / "heatmap.csv");
      if (show_ranking) std::cout << harness::read_text(dir / "ranking.txt");
      return 0;
    }
    if (*explain_cmd) {
      std::cout << explain(SelectionContext::parse(ctx)) << "\n";
      return 0;
    }
    if (*server) {
      harness::ExperimentPlan plan;
      plan.suite = "external";
      plan.problems.push_back(harness::ProblemEntry{
          "external", [cmd](std::uint64_t, std::uint64_t) { return std::make_unique<harness::ExternalEvaluator>(cmd); },
          {budget}, {workers}});
      plan.algorithms = parse_algorithms(algs);
      plan.seeds = parse_seeds(seeds);
      plan.master_seed = resolve_master_seed(server_master, master_seed);
      plan.threads = threads;
      return finish(harness::run_experiment(plan), out);
    }
    if (*manifest) {
      std::cout << bench::write_manifest(bench::load_suite(suite));
      return 0;
    }
    if (*suites) {
      for (const auto& n : bench::suite_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
