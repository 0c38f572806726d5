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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optbench/combinators/bet_and_run.hpp"
#include "optbench/combinators/chain.hpp"
#include "optbench/combinators/progressive.hpp"
#include "optbench/combinators/spec.hpp"
#include "optbench/solvers/cma.hpp"
#include "optbench/solvers/de.hpp"
#include "optbench/solvers/discrete.hpp"
#include "optbench/solvers/es.hpp"
#include "optbench/solvers/local_search.hpp"
#include "optbench/solvers/metamodel.hpp"
#include "optbench/solvers/recentering.hpp"
#include "optbench/solvers/softmax.hpp"
#include "optbench/solvers/tbpsa.hpp"
#include "optbench/wizard/selection.hpp"

namespace optbench {

inline constexpr std::array<std::string_view, 18> kSolverIds = {
    "one-plus-one-es",           "cma",
    "diagonal-cma",              "de",
    "lhs-de",                    "tbpsa",
    "naive-tbpsa",               "powell",
    "linear-tr",                 "quadratic-tr",
    "recentering",               "discrete-one-plus-one",
    "linear-decay-one-plus-one", "adaptive-one-plus-one",
    "portfolio-one-plus-one",    "optimistic-noisy-one-plus-one",
    "fastga",                    "abbo",
};

/// Nesting limit for "abbo" leaves resolved through the wizard.
inline constexpr int kMaxWizardDepth = 3;

inline bool is_known_solver(std::string_view id) {
  return std::find(kSolverIds.begin(), kSolverIds.end(), id) != kSolverIds.end();
}

namespace registry_detail {

[[noreturn]] inline void unknown(const std::string& id) {
  std::string known;
  for (auto k : kSolverIds) known += (known.empty() ? "" : ", ") + std::string(k);
  throw RegistryError("unknown solver id '" + id + "'; known ids: " + known);
}

inline void check_params(const AlgorithmSpec& leaf) {
  for (const auto& [key, value] : leaf.params) {
    if (key != "asks") throw RegistryError("solver " + leaf.id + " has no parameter '" + key + "'");
  }
  if (auto asks = leaf.int_param("asks"); asks && *asks < 0) {
    throw ConfigError("asks of " + leaf.id + " must be non-negative");
  }
}

inline std::unique_ptr<Optimizer> build(const AlgorithmSpec& spec, const RunContext& context,
                                        const std::optional<Point>& start, std::vector<SeedLabel> path,
                                        int depth);

inline std::unique_ptr<Optimizer> build_leaf(const AlgorithmSpec& spec, const RunContext& context,
                                             const std::optional<Point>& start,
                                             const std::vector<SeedLabel>& path, int depth) {
  const std::string& id = spec.id;
  if (!is_known_solver(id)) unknown(id);
  check_params(spec);
  if (id == "abbo") {
    if (depth >= kMaxWizardDepth) throw ConfigError("wizard nesting deeper than " + std::to_string(kMaxWizardDepth));
    auto child_path = path;
    child_path.emplace_back("abbo");
    return build(select_algorithm(SelectionContext::from(context)), context, start, std::move(child_path),
                 depth + 1);
  }
  SolverSetup setup{context, derive_seed(context.master_seed, path), start};
  if (id == "one-plus-one-es") return std::make_unique<OnePlusOneEs>(std::move(setup));
  if (id == "cma") return std::make_unique<CmaEs>(std::move(setup), false);
  if (id == "diagonal-cma") return std::make_unique<CmaEs>(std::move(setup), true);
  if (id == "de") return std::make_unique<DifferentialEvolution>(std::move(setup), DeOptions{});
  if (id == "lhs-de") {
    return std::make_unique<DifferentialEvolution>(std::move(setup), DeOptions{30, 0.8, 0.5, true});
  }
  if (id == "tbpsa") return std::make_unique<Tbpsa>(std::move(setup), TbpsaOptions{});
  if (id == "naive-tbpsa") {
    TbpsaOptions o;
    o.naive = true;
    return std::make_unique<Tbpsa>(std::move(setup), o);
  }
  if (id == "powell") return std::make_unique<LocalSearch>(std::move(setup), LocalSearchVariant::powell);
  if (id == "linear-tr") return std::make_unique<LocalSearch>(std::move(setup), LocalSearchVariant::linear_tr);
  if (id == "quadratic-tr") {
    return std::make_unique<LocalSearch>(std::move(setup), LocalSearchVariant::quadratic_tr);
  }
  if (id == "recentering") return std::make_unique<OneShotRecentering>(std::move(setup));
  if (id == "discrete-one-plus-one") {
    return std::make_unique<DiscreteOnePlusOne>(std::move(setup), DiscreteVariant::fixed);
  }
  if (id == "linear-decay-one-plus-one") {
    return std::make_unique<DiscreteOnePlusOne>(std::move(setup), DiscreteVariant::linear_decay);
  }
  if (id == "adaptive-one-plus-one") {
    return std::make_unique<DiscreteOnePlusOne>(std::move(setup), DiscreteVariant::adaptive);
  }
  if (id == "portfolio-one-plus-one") {
    return std::make_unique<DiscreteOnePlusOne>(std::move(setup), DiscreteVariant::portfolio);
  }
  if (id == "optimistic-noisy-one-plus-one") {
    return std::make_unique<DiscreteOnePlusOne>(std::move(setup), DiscreteVariant::optimistic_noisy);
  }
  return std::make_unique<FastGa>(std::move(setup));
}

inline ChildFactory child_factory(const AlgorithmSpec& spec, std::vector<SeedLabel> path, int depth,
                                  bool per_child_spec) {
  return [spec, path = std::move(path), depth, per_child_spec](std::size_t index, RunContext context,
                                                               std::optional<Point> start) {
    const AlgorithmSpec& child = per_child_spec ? spec.children.at(index) : spec.children.front();
    auto child_path = path;
    child_path.emplace_back(static_cast<std::int64_t>(index));
    return build(child, context, start, std::move(child_path), depth);
  };
}

inline std::unique_ptr<Optimizer> build(const AlgorithmSpec& spec, const RunContext& context,
                                        const std::optional<Point>& start, std::vector<SeedLabel> path,
                                        int depth) {
  spec.validate();
  SolverSetup setup{context, derive_seed(context.master_seed, path), start};
  switch (spec.kind) {
    case SpecKind::leaf:
      return build_leaf(spec, context, start, path, depth);
    case SpecKind::chain: {
      std::vector<std::optional<std::int64_t>> absolute;
      for (const auto& c : spec.children) {
        absolute.push_back(c.kind == SpecKind::leaf ? c.int_param("asks") : std::nullopt);
      }
      auto budgets = chain_budgets(context.budget, spec.fractions, absolute);
      return std::make_unique<Chain>(std::move(setup), std::move(budgets),
                                     child_factory(spec, std::move(path), depth, true));
    }
    case SpecKind::bet_and_run:
      return std::make_unique<BetAndRun>(std::move(setup), spec.children.size(), spec.phase_fraction,
                                         child_factory(spec, std::move(path), depth, true));
    case SpecKind::wrap:
      break;
  }
  auto child_path = path;
  child_path.emplace_back(std::int64_t{0});
  switch (spec.wrap) {
    case WrapKind::metamodel:
      return std::make_unique<MetamodelWrapper>(
          std::move(setup), build(spec.children.front(), context, start, std::move(child_path), depth));
    case WrapKind::progressive:
      return std::make_unique<ProgressiveWidening>(std::move(setup),
                                                   child_factory(spec, std::move(path), depth, false));
    case WrapKind::softmax:
      break;
  }
  const RunContext inner = SoftmaxBridge::inner_context(context);
  std::optional<Point> inner_start;
  if (start) inner_start = SoftmaxEncoding(context.domain).encode(*start);
  return std::make_unique<SoftmaxBridge>(
      std::move(setup), build(spec.children.front(), inner, inner_start, std::move(child_path), depth));
}

}  // namespace registry_detail

/// Checks solver ids and parameters without building anything.
inline void check_spec(const AlgorithmSpec& spec) {
  spec.validate();
  if (spec.kind == SpecKind::leaf) {
    if (!is_known_solver(spec.id)) registry_detail::unknown(spec.id);
    registry_detail::check_params(spec);
  }
  for (const auto& c : spec.children) check_spec(c);
}

/// Builds the optimizer tree for `spec`. Every node draws its RNG seed from
/// the context's master seed and its position in the tree.
inline std::unique_ptr<Optimizer> build_optimizer(const AlgorithmSpec& spec, const RunContext& context,
                                                  const std::optional<Point>& start = std::nullopt,
                                                  std::vector<SeedLabel> path = {}) {
  check_spec(spec);
  return registry_detail::build(spec, context, start, std::move(path), 0);
}

inline std::unique_ptr<Optimizer> build_optimizer(std::string_view spec, const RunContext& context) {
  return build_optimizer(parse_spec(spec), context);
}

}  // namespace optbench
