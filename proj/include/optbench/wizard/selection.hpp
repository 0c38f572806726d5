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

// The ABBO selection wizard: an ordered list of rules over features known
// before the run starts. The first matching rule wins.
//
//  discrete variables present
//    1  noisy and categorical            optimistic-noisy-one-plus-one
//    2  max arity < 5, w = 1             linear-decay-one-plus-one
//    3  max arity < 5, w > 1             adaptive-one-plus-one
//    4  finite alphabets                 softmax(<continuous selection>)
//    5  unbounded integers               fastga
//  noisy, continuous
//    6  d > 100                          progressive(de)
//    7  d <= 30                          tbpsa
//    8  b > 100                          quadratic-tr
//    9  otherwise                        tbpsa
//  parallel, continuous
//   10  w > b/2 or b < d                 recentering
//   11  w > b/5, d < 5, b < 100          diagonal-cma
//   12  w > b/5, d < 5, b < 500          chain(diagonal-cma[asks=100],metamodel(cma))
//   13  w > b/5                          naive-tbpsa
//  sequential, continuous
//   14  b > 6000, d > 7                  chain(cma,powell;0.5,0.5)
//   15  b < 30d, d > 30                  one-plus-one-es
//   16  d < 5, b < 30d                   metamodel(cma)
//   17  b < 30d                          linear-tr
//   18  otherwise                        cma

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "optbench/combinators/spec.hpp"
#include "optbench/core/optimizer.hpp"

namespace optbench {

struct SelectionContext {
  std::int64_t d = 1;
  std::int64_t budget = 1;
  std::int64_t num_workers = 1;
  bool noisy = false;
  bool has_discrete = false;
  bool all_discrete = false;
  bool has_categorical = false;
  std::int64_t max_arity = 0;
  bool has_unbounded_discrete = false;
  bool fully_continuous = true;

  static SelectionContext from(const RunContext& run) {
    const DomainSpec& dom = run.domain;
    SelectionContext c;
    c.d = static_cast<std::int64_t>(dom.dimension());
    c.budget = run.budget;
    c.num_workers = run.num_workers;
    c.noisy = run.noisy;
    c.has_discrete = dom.has_discrete();
    c.all_discrete = dom.all_discrete();
    c.has_categorical = dom.has_categorical();
    c.max_arity = dom.max_arity();
    c.has_unbounded_discrete = dom.has_unbounded_discrete();
    c.fully_continuous = dom.all_continuous();
    return c;
  }

  /// The same problem seen through a continuous reparametrization.
  [[nodiscard]] SelectionContext continuous() const {
    SelectionContext c = *this;
    c.has_discrete = c.all_discrete = c.has_categorical = c.has_unbounded_discrete = false;
    c.max_arity = 0;
    c.fully_continuous = true;
    return c;
  }

  void validate() const {
    if (d < 1) throw ConfigError("selection context needs d >= 1");
    if (budget < 1) throw ConfigError("selection context needs b >= 1");
    if (num_workers < 1) throw ConfigError("selection context needs w >= 1");
  }

  /// Parses "d=10,b=1000,w=4,noisy=true,...". Unset flags keep their
  /// defaults; fully_continuous defaults to !has_discrete.
  static SelectionContext parse(std::string_view text) {
    SelectionContext c;
    bool continuous_set = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const std::string_view item = text.substr(pos, comma - pos);
      pos = comma + 1;
      if (item.empty()) continue;
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("context entry without '=': " + std::string(item));
      const std::string key(item.substr(0, eq));
      const std::string_view value = item.substr(eq + 1);
      auto integer = [&](std::string_view v) {
        if (v == "inf") return kInfiniteArity;
        std::int64_t out = 0;
        auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || end != v.data() + v.size()) {
          throw ParseError("context entry " + key + " is not an integer: " + std::string(v));
        }
        return out;
      };
      auto boolean = [&](std::string_view v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ParseError("context entry " + key + " is not a boolean: " + std::string(v));
      };
      if (key == "d") {
        c.d = integer(value);
      } else if (key == "b") {
        c.budget = integer(value);
      } else if (key == "w") {
        c.num_workers = integer(value);
      } else if (key == "noisy") {
        c.noisy = boolean(value);
      } else if (key == "has_discrete") {
        c.has_discrete = boolean(value);
      } else if (key == "all_discrete") {
        c.all_discrete = boolean(value);
      } else if (key == "has_categorical") {
        c.has_categorical = boolean(value);
      } else if (key == "max_arity") {
        c.max_arity = integer(value);
      } else if (key == "has_unbounded_discrete") {
        c.has_unbounded_discrete = boolean(value);
      } else if (key == "fully_continuous") {
        c.fully_continuous = boolean(value);
        continuous_set = true;
      } else {
        throw ParseError("unknown context entry: " + key);
      }
    }
    if (c.all_discrete || c.has_categorical || c.has_unbounded_discrete) c.has_discrete = true;
    if (!continuous_set) c.fully_continuous = !c.has_discrete;
    c.validate();
    return c;
  }

  [[nodiscard]] std::string to_string() const {
    std::ostringstream out;
    out << "d=" << d << ",b=" << budget << ",w=" << num_workers << ",noisy=" << (noisy ? "true" : "false")
        << ",has_discrete=" << (has_discrete ? "true" : "false")
        << ",all_discrete=" << (all_discrete ? "true" : "false")
        << ",has_categorical=" << (has_categorical ? "true" : "false") << ",max_arity=";
    if (max_arity == kInfiniteArity) {
      out << "inf";
    } else {
      out << max_arity;
    }
    out << ",has_unbounded_discrete=" << (has_unbounded_discrete ? "true" : "false")
        << ",fully_continuous=" << (fully_continuous ? "true" : "false");
    return out.str();
  }

  bool operator==(const SelectionContext&) const = default;
};

struct Selection {
  int rule = 0;
  AlgorithmSpec spec;
};

inline Selection select_with_rule(const SelectionContext& c) {
  using S = AlgorithmSpec;
  const double b = static_cast<double>(c.budget);
  const double w = static_cast<double>(c.num_workers);
  const double d = static_cast<double>(c.d);

  if (c.has_discrete || !c.fully_continuous) {
    if (c.noisy && c.has_categorical) return {1, S::leaf("optimistic-noisy-one-plus-one")};
    if (c.max_arity < 5 && c.num_workers == 1) return {2, S::leaf("linear-decay-one-plus-one")};
    if (c.max_arity < 5) return {3, S::leaf("adaptive-one-plus-one")};
    if (!c.has_unbounded_discrete) {
      return {4, S::wrapped(WrapKind::softmax, select_with_rule(c.continuous()).spec)};
    }
    return {5, S::leaf("fastga")};
  }
  if (c.noisy) {
    if (c.d > 100) return {6, S::wrapped(WrapKind::progressive, S::leaf("de"))};
    if (c.d <= 30) return {7, S::leaf("tbpsa")};
    if (c.budget > 100) return {8, S::leaf("quadratic-tr")};
    return {9, S::leaf("tbpsa")};
  }
  if (w > b / 2.0 || b < d) return {10, S::leaf("recentering")};
  if (w > b / 5.0 && c.d < 5 && c.budget < 100) return {11, S::leaf("diagonal-cma")};
  if (w > b / 5.0 && c.d < 5 && c.budget < 500) {
    return {12, S::chain({S::leaf("diagonal-cma", {{"asks", "100"}}), S::wrapped(WrapKind::metamodel, S::leaf("cma"))},
                         {0.5, 0.5})};
  }
  if (w > b / 5.0) return {13, S::leaf("naive-tbpsa")};
  if (c.budget > 6000 && c.d > 7) return {14, S::chain({S::leaf("cma"), S::leaf("powell")}, {0.5, 0.5})};
  if (b < 30.0 * d && c.d > 30) return {15, S::leaf("one-plus-one-es")};
  if (c.d < 5 && b < 30.0 * d) return {16, S::wrapped(WrapKind::metamodel, S::leaf("cma"))};
  if (b < 30.0 * d) return {17, S::leaf("linear-tr")};
  return {18, S::leaf("cma")};
}

inline AlgorithmSpec select_algorithm(const SelectionContext& c) { return select_with_rule(c).spec; }

/// "rule <n>: <canonical spec>"
inline std::string explain(const SelectionContext& c) {
  const Selection s = select_with_rule(c);
  return "rule " + std::to_string(s.rule) + ": " + s.spec.to_string();
}

}  // namespace optbench
