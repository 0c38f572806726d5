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

// Named benchmark suites and their JSON manifest form:
//
//   {"format": "optbench-suite", "version": 1, "name": "...",
//    "problems": [{"id": "...", "base": "sphere", "d": 5,
//                  "translation_std": 1.0, "far_optimum": false,
//                  "rotate": false, "symmetrize": false, "noise_std": 0.0,
//                  "composite": {"blocks": 5, "overlap": false},
//                  "budgets": [100, 1000], "workers": [1]}]}
//
// "composite" only appears for lsgo_composite problems. Transform seeds are
// not part of the manifest: each (problem, seed) cell draws its instance
// from the master seed.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "optbench/bench/problem.hpp"

namespace optbench::bench {

inline constexpr int kManifestVersion = 1;

struct SuiteProblem {
  std::string id;
  FunctionSpec function;
  std::vector<std::int64_t> budgets;
  std::vector<std::int64_t> workers{1};

  bool operator==(const SuiteProblem&) const = default;
};

struct BenchmarkSuite {
  std::string name;
  std::vector<SuiteProblem> problems;

  void validate() const {
    if (name.empty()) throw ConfigError("suite without a name");
    if (problems.empty()) throw ConfigError("suite " + name + " has no problems");
    std::set<std::string> ids;
    for (const auto& p : problems) {
      if (p.id.empty()) throw ConfigError("suite " + name + " has a problem without an id");
      if (!ids.insert(p.id).second) throw ConfigError("duplicate problem id " + p.id);
      p.function.validate();
      if (p.budgets.empty() || p.workers.empty()) throw ConfigError("problem " + p.id + " needs budgets and workers");
      for (auto b : p.budgets) {
        if (b < 1) throw ConfigError("problem " + p.id + " has a non-positive budget");
        for (auto w : p.workers) {
          if (w < 1 || w > b) throw ConfigError("problem " + p.id + " has workers outside [1, budget]");
        }
      }
    }
  }

  bool operator==(const BenchmarkSuite&) const = default;
};

namespace suite_detail {

inline SuiteProblem problem(std::string id, BaseFunction base, std::size_t d, std::vector<std::int64_t> budgets,
                            std::vector<std::int64_t> workers = {1}, double translation = 1.0, double noise = 0.0) {
  SuiteProblem p;
  p.id = std::move(id);
  p.function.base = base;
  p.function.d = d;
  p.function.transform.translation_std = is_continuous_base(base) ? translation : 0.0;
  p.function.transform.noise_std = noise;
  p.budgets = std::move(budgets);
  p.workers = std::move(workers);
  return p;
}

inline std::string dim_id(BaseFunction base, std::size_t d) {
  return std::string(base_name(base)) + "-d" + std::to_string(d);
}

}  // namespace suite_detail

/// 8 functions x d in {5, 20} x budgets {100, 1000, 10000}, sequential.
inline BenchmarkSuite yabbob_lite() {
  using B = BaseFunction;
  BenchmarkSuite s{"yabbob_lite", {}};
  for (B f : {B::sphere, B::cigar, B::ellipsoid, B::hm, B::ackley, B::rosenbrock, B::griewank, B::lunacek}) {
    for (std::size_t d : {5, 20}) s.problems.push_back(suite_detail::problem(suite_detail::dim_id(f, d), f, d, {100, 1000, 10000}));
  }
  return s;
}

/// Multimodal functions under 100 parallel workers.
inline BenchmarkSuite parallel_multimodal_lite() {
  using B = BaseFunction;
  BenchmarkSuite s{"parallel_multimodal_lite", {}};
  for (B f : {B::ackley, B::rosenbrock, B::deceptive_multimodal, B::griewank, B::lunacek, B::hm}) {
    for (std::size_t d : {5, 20}) {
      s.problems.push_back(suite_detail::problem(suite_detail::dim_id(f, d), f, d, {1000, 10000}, {100}));
    }
  }
  return s;
}

/// Additive Gaussian noise with sigma in {0.1, 1, 10}.
inline BenchmarkSuite noisy_lite() {
  using B = BaseFunction;
  BenchmarkSuite s{"noisy_lite", {}};
  for (B f : {B::sphere, B::ellipsoid, B::rosenbrock}) {
    for (std::size_t d : {2, 10}) {
      for (double noise : {0.1, 1.0, 10.0}) {
        std::ostringstream id;
        id << suite_detail::dim_id(f, d) << "-noise" << noise;
        s.problems.push_back(suite_detail::problem(id.str(), f, d, {500, 5000}, {1}, 1.0, noise));
      }
    }
  }
  return s;
}

/// LSGO-style composites up to d = 200, with and without overlapping blocks.
inline BenchmarkSuite lsgo_lite() {
  BenchmarkSuite s{"lsgo_lite", {}};
  for (std::size_t d : {50, 200}) {
    for (bool overlap : {false, true}) {
      SuiteProblem p = suite_detail::problem("lsgo-d" + std::to_string(d) + (overlap ? "-overlap" : ""),
                                             BaseFunction::lsgo_composite, d, {1000, 10000}, {1}, 0.0);
      p.function.generator = CompositeGenerator{d == 50 ? 5 : 10, overlap};
      s.problems.push_back(std::move(p));
    }
  }
  return s;
}

/// Large-scale smoke case: sphere and ellipsoid at d = 1000.
inline BenchmarkSuite lsgo_smoke() {
  BenchmarkSuite s{"lsgo_smoke", {}};
  for (BaseFunction f : {BaseFunction::sphere, BaseFunction::ellipsoid}) {
    s.problems.push_back(suite_detail::problem(suite_detail::dim_id(f, 1000), f, 1000, {1000}));
  }
  return s;
}

inline BenchmarkSuite discrete_lite() {
  using B = BaseFunction;
  BenchmarkSuite s{"discrete_lite", {}};
  for (std::size_t d : {20, 100}) s.problems.push_back(suite_detail::problem(suite_detail::dim_id(B::onemax, d), B::onemax, d, {500, 5000}));
  for (std::size_t d : {20, 50}) {
    s.problems.push_back(suite_detail::problem(suite_detail::dim_id(B::leadingones, d), B::leadingones, d, {500, 5000}));
  }
  for (std::size_t n : {10, 30}) {
    s.problems.push_back(suite_detail::problem("simple_tsp-n" + std::to_string(n), B::simple_tsp, n, {500, 5000}));
  }
  return s;
}

inline std::vector<std::string> suite_names() {
  return {"yabbob_lite", "parallel_multimodal_lite", "noisy_lite", "lsgo_lite", "lsgo_smoke", "discrete_lite"};
}

inline BenchmarkSuite suite_by_name(const std::string& name) {
  if (name == "yabbob_lite") return yabbob_lite();
  if (name == "parallel_multimodal_lite") return parallel_multimodal_lite();
  if (name == "noisy_lite") return noisy_lite();
  if (name == "lsgo_lite") return lsgo_lite();
  if (name == "lsgo_smoke") return lsgo_smoke();
  if (name == "discrete_lite") return discrete_lite();
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown suite '" + name + "'; known suites: " + known);
}

inline nlohmann::json suite_to_json(const BenchmarkSuite& suite) {
  suite.validate();
  nlohmann::json problems = nlohmann::json::array();
  for (const auto& p : suite.problems) {
    if (!p.function.blocks.empty()) throw ConfigError("problem " + p.id + ": explicit composite blocks have no manifest form");
    const auto& t = p.function.transform;
    nlohmann::json j = {
        {"id", p.id},
        {"base", std::string(base_name(p.function.base))},
        {"d", p.function.d},
        {"translation_std", t.translation_std},
        {"far_optimum", t.far_optimum},
        {"rotate", t.rotate},
        {"symmetrize", t.symmetrize},
        {"noise_std", t.noise_std},
        {"budgets", p.budgets},
        {"workers", p.workers},
    };
    if (p.function.generator) {
      j["composite"] = {{"blocks", p.function.generator->blocks}, {"overlap", p.function.generator->overlap}};
    }
    problems.push_back(std::move(j));
  }
  return {{"format", "optbench-suite"}, {"version", kManifestVersion}, {"name", suite.name}, {"problems", problems}};
}

inline std::string write_manifest(const BenchmarkSuite& suite) { return suite_to_json(suite).dump(2) + "\n"; }

inline BenchmarkSuite read_manifest(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "optbench-suite") throw ParseError("not an optbench suite manifest");
    const int version = j.at("version").get<int>();
    if (version != kManifestVersion) {
      throw ParseError("unsupported manifest version " + std::to_string(version));
    }
    BenchmarkSuite suite;
    suite.name = j.at("name").get<std::string>();
    for (const auto& p : j.at("problems")) {
      SuiteProblem sp;
      sp.id = p.at("id").get<std::string>();
      sp.function.base = parse_base(p.at("base").get<std::string>());
      sp.function.d = p.at("d").get<std::size_t>();
      auto& t = sp.function.transform;
      t.translation_std = p.value("translation_std", 0.0);
      t.far_optimum = p.value("far_optimum", false);
      t.rotate = p.value("rotate", false);
      t.symmetrize = p.value("symmetrize", false);
      t.noise_std = p.value("noise_std", 0.0);
      if (p.contains("composite")) {
        sp.function.generator =
            CompositeGenerator{p["composite"].at("blocks").get<int>(), p["composite"].value("overlap", false)};
      }
      sp.budgets = p.at("budgets").get<std::vector<std::int64_t>>();
      sp.workers = p.value("workers", std::vector<std::int64_t>{1});
      suite.problems.push_back(std::move(sp));
    }
    suite.validate();
    return suite;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed suite manifest: ") + e.what());
  }
}

/// A suite name, or a path to a manifest file.
inline BenchmarkSuite load_suite(const std::string& name_or_path) {
  for (const auto& n : suite_names()) {
    if (n == name_or_path) return suite_by_name(n);
  }
  std::ifstream in(name_or_path);
  if (!in) return suite_by_name(name_or_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_manifest(buf.str());
}

}  // namespace optbench::bench
