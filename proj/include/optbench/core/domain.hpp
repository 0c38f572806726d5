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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "optbench/core/errors.hpp"

namespace optbench {

/// A point holds one value per declared variable. Integer, categorical and
/// unbounded-integer variables store integral values.
using Point = std::vector<double>;

struct Continuous {
  std::optional<double> lower;
  std::optional<double> upper;
  double scale = 1.0;

  bool operator==(const Continuous&) const = default;
};

struct Integer {
  std::int64_t low = 0;
  std::int64_t high = 0;

  bool operator==(const Integer&) const = default;
};

struct Categorical {
  int arity = 2;

  bool operator==(const Categorical&) const = default;
};

struct UnboundedInteger {
  bool operator==(const UnboundedInteger&) const = default;
};

using VariableKind = std::variant<Continuous, Integer, Categorical, UnboundedInteger>;

struct VariableSpec {
  VariableKind kind;
  std::size_t position = 0;

  bool operator==(const VariableSpec&) const = default;
};

inline constexpr std::int64_t kInfiniteArity = std::numeric_limits<std::int64_t>::max();

inline bool is_continuous(const VariableKind& kind) noexcept {
  return std::holds_alternative<Continuous>(kind);
}

/// Alphabet size of a discrete variable: the number of admissible values for
/// integer ranges, the arity for categoricals, kInfiniteArity for unbounded
/// integers. Continuous variables report 0.
inline std::int64_t alphabet_size(const VariableKind& kind) noexcept {
  return std::visit(
      [](const auto& v) -> std::int64_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Integer>) {
          return v.high - v.low + 1;
        } else if constexpr (std::is_same_v<T, Categorical>) {
          return v.arity;
        } else if constexpr (std::is_same_v<T, UnboundedInteger>) {
          return kInfiniteArity;
        } else {
          return 0;
        }
      },
      kind);
}

/// Ordered list of variables describing a search space.
class DomainSpec {
 public:
  DomainSpec() = default;

  explicit DomainSpec(std::vector<VariableKind> kinds) {
    if (kinds.empty()) throw ConfigError("domain must declare at least one variable");
    variables_.reserve(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      validate(kinds[i], i);
      variables_.push_back(VariableSpec{std::move(kinds[i]), i});
    }
  }

  static DomainSpec continuous(std::size_t n, double scale = 1.0) {
    return DomainSpec(std::vector<VariableKind>(n, Continuous{std::nullopt, std::nullopt, scale}));
  }

  static DomainSpec box(std::size_t n, double lower, double upper, double scale = 1.0) {
    return DomainSpec(std::vector<VariableKind>(n, Continuous{lower, upper, scale}));
  }

  static DomainSpec binary(std::size_t n) {
    return DomainSpec(std::vector<VariableKind>(n, Integer{0, 1}));
  }

  [[nodiscard]] const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  [[nodiscard]] std::size_t size() const noexcept { return variables_.size(); }
  [[nodiscard]] const VariableKind& kind(std::size_t i) const { return variables_.at(i).kind; }

  /// Scalar dimension after encoding; a categorical of arity a counts a times.
  [[nodiscard]] std::size_t dimension() const noexcept {
    std::size_t d = 0;
    for (const auto& v : variables_) {
      if (const auto* c = std::get_if<Categorical>(&v.kind)) {
        d += static_cast<std::size_t>(c->arity);
      } else {
        d += 1;
      }
    }
    return d;
  }

  [[nodiscard]] bool all_continuous() const noexcept {
    return std::all_of(variables_.begin(), variables_.end(),
                       [](const VariableSpec& v) { return is_continuous(v.kind); });
  }

  [[nodiscard]] bool has_discrete() const noexcept { return !all_continuous(); }

  [[nodiscard]] bool all_discrete() const noexcept {
    return !variables_.empty() &&
           std::none_of(variables_.begin(), variables_.end(),
                        [](const VariableSpec& v) { return is_continuous(v.kind); });
  }

  [[nodiscard]] bool has_categorical() const noexcept {
    return std::any_of(variables_.begin(), variables_.end(), [](const VariableSpec& v) {
      return std::holds_alternative<Categorical>(v.kind);
    });
  }

  [[nodiscard]] bool has_unbounded_discrete() const noexcept {
    return std::any_of(variables_.begin(), variables_.end(), [](const VariableSpec& v) {
      return std::holds_alternative<UnboundedInteger>(v.kind);
    });
  }

  /// Largest alphabet among discrete variables (kInfiniteArity when an
  /// unbounded integer is present, 0 for purely continuous domains).
  [[nodiscard]] std::int64_t max_arity() const noexcept {
    std::int64_t best = 0;
    for (const auto& v : variables_) best = std::max(best, alphabet_size(v.kind));
    return best;
  }

  /// Zero for unbounded continuous variables, the midpoint for bounded ones,
  /// the lower midpoint for integer ranges, category 0 for categoricals.
  [[nodiscard]] Point center() const {
    Point p;
    p.reserve(variables_.size());
    for (const auto& v : variables_) p.push_back(center_of(v.kind));
    return p;
  }

  [[nodiscard]] bool contains(std::span<const double> point) const noexcept {
    if (point.size() != variables_.size()) return false;
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (!admissible(variables_[i].kind, point[i])) return false;
    }
    return true;
  }

  bool operator==(const DomainSpec&) const = default;

  static double center_of(const VariableKind& kind) noexcept {
    return std::visit(
        [](const auto& v) -> double {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Continuous>) {
            if (v.lower && v.upper) return 0.5 * (*v.lower + *v.upper);
            if (v.lower) return *v.lower + v.scale;
            if (v.upper) return *v.upper - v.scale;
            return 0.0;
          } else if constexpr (std::is_same_v<T, Integer>) {
            return static_cast<double>(v.low + (v.high - v.low) / 2);
          } else {
            return 0.0;
          }
        },
        kind);
  }

  static bool admissible(const VariableKind& kind, double value) noexcept {
    if (!std::isfinite(value)) return false;
    return std::visit(
        [value](const auto& v) -> bool {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Continuous>) {
            return (!v.lower || value >= *v.lower) && (!v.upper || value <= *v.upper);
          } else if constexpr (std::is_same_v<T, Integer>) {
            return value == std::round(value) && value >= static_cast<double>(v.low) &&
                   value <= static_cast<double>(v.high);
          } else if constexpr (std::is_same_v<T, Categorical>) {
            return value == std::round(value) && value >= 0.0 && value < v.arity;
          } else {
            return value == std::round(value);
          }
        },
        kind);
  }

 private:
  static void validate(const VariableKind& kind, std::size_t index) {
    const std::string where = "variable " + std::to_string(index) + ": ";
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Continuous>) {
            if (!(v.scale > 0.0) || !std::isfinite(v.scale)) {
              throw ConfigError(where + "scale must be positive");
            }
            if (v.lower && v.upper && !(*v.lower < *v.upper)) {
              throw ConfigError(where + "lower bound must be below upper bound");
            }
          } else if constexpr (std::is_same_v<T, Integer>) {
            if (v.low > v.high) throw ConfigError(where + "integer range is empty");
          } else if constexpr (std::is_same_v<T, Categorical>) {
            if (v.arity < 2) throw ConfigError(where + "categorical arity must be >= 2");
          }
        },
        kind);
  }

  std::vector<VariableSpec> variables_;
};

}  // namespace optbench
