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

// Base test functions. All continuous entries have minimum value 0; the
// minimizer is the origin except for rosenbrock (all ones) and lunacek
// (mu0 in every coordinate).
//
//   sphere      sum x_i^2
//   cigar       x_1^2 + 1e6 sum_{i>=2} x_i^2
//   ellipsoid   sum 10^(6 (i-1)/(d-1)) x_i^2
//   hm          sum x_i^2 (1.1 + cos(1/x_i)), a zero coordinate contributes 0
//   ackley      -20 exp(-0.2 sqrt(mean x^2)) - exp(mean cos(2 pi x)) + 20 + e
//   rosenbrock  sum 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
//   griewank    1 + sum x_i^2 / 4000 - prod cos(x_i / sqrt(i))
//   lunacek     min(sum (x_i - mu0)^2, d + s sum (x_i - mu1)^2)
//               + 10 sum (1 - cos(2 pi (x_i - mu0))),
//               mu0 = 2.5, s = 1 - 1/(2 sqrt(d + 20) - 8.2),
//               mu1 = -sqrt((mu0^2 - 1) / s)
//   deceptive_multimodal
//               min(r (1.1 + sin(1/r)), 0.3 + 0.05 |x - c|^2),
//               r = |x|, c = (3/sqrt(d)) (1, ..., 1); value 0 at r = 0.
//               The second basin is wide and easy to reach but sits 0.3
//               above the oscillating narrow one around the origin.
//
// Discrete entries take 0/1 strings: onemax counts zeros, leadingones is
// d minus the length of the leading run of ones. Both are 0 at all ones.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optbench/core/errors.hpp"

namespace optbench::bench {

enum class BaseFunction {
  sphere,
  cigar,
  ellipsoid,
  hm,
  ackley,
  rosenbrock,
  griewank,
  lunacek,
  deceptive_multimodal,
  onemax,
  leadingones,
  simple_tsp,
  lsgo_composite,
};

inline constexpr std::string_view kBaseNames[] = {
    "sphere",   "cigar",   "ellipsoid",            "hm",     "ackley",      "rosenbrock", "griewank",
    "lunacek",  "deceptive_multimodal", "onemax", "leadingones", "simple_tsp", "lsgo_composite",
};

inline std::string_view base_name(BaseFunction f) { return kBaseNames[static_cast<int>(f)]; }

inline BaseFunction parse_base(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kBaseNames); ++i) {
    if (kBaseNames[i] == name) return static_cast<BaseFunction>(i);
  }
  throw ConfigError("unknown base function '" + std::string(name) + "'");
}

inline bool is_continuous_base(BaseFunction f) {
  return f != BaseFunction::onemax && f != BaseFunction::leadingones && f != BaseFunction::simple_tsp;
}

namespace fn {

inline double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double cigar(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return x[0] * x[0] + 1e6 * sphere(x.subspan(1));
}

inline double ellipsoid(std::span<const double> x) {
  const std::size_t d = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double e = d > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
    s += std::pow(10.0, e) * x[i] * x[i];
  }
  return s;
}

inline double hm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    if (v != 0.0) s += v * v * (1.1 + std::cos(1.0 / v));
  }
  return s;
}

inline double ackley(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double n = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * std::numbers::pi * v);
  }
  const double value = -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
  return std::max(0.0, value);
}

inline double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  if (x.size() == 1) s = (1.0 - x[0]) * (1.0 - x[0]);
  return s;
}

inline double griewank(std::span<const double> x) {
  double s = 0.0;
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i] / 4000.0;
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return std::max(0.0, 1.0 + s - p);
}

inline constexpr double kLunacekMu0 = 2.5;

inline double lunacek(std::span<const double> x) {
  const double d = static_cast<double>(x.size());
  const double s = 1.0 - 1.0 / (2.0 * std::sqrt(d + 20.0) - 8.2);
  const double mu1 = -std::sqrt((kLunacekMu0 * kLunacekMu0 - 1.0) / s);
  double a = 0.0;
  double b = 0.0;
  double r = 0.0;
  for (double v : x) {
    a += (v - kLunacekMu0) * (v - kLunacekMu0);
    b += (v - mu1) * (v - mu1);
    r += 1.0 - std::cos(2.0 * std::numbers::pi * (v - kLunacekMu0));
  }
  return std::min(a, d + s * b) + 10.0 * r;
}

inline double deceptive_multimodal(std::span<const double> x) {
  const double r = std::sqrt(sphere(x));
  const double c = 3.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, x.size())));
  double far = 0.0;
  for (double v : x) far += (v - c) * (v - c);
  const double narrow = r == 0.0 ? 0.0 : r * (1.1 + std::sin(1.0 / r));
  return std::min(narrow, 0.3 + 0.05 * far);
}

inline double onemax(std::span<const double> x) {
  double zeros = 0.0;
  for (double v : x) zeros += v == 1.0 ? 0.0 : 1.0;
  return zeros;
}

inline double leadingones(std::span<const double> x) {
  std::size_t run = 0;
  while (run < x.size() && x[run] == 1.0) ++run;
  return static_cast<double>(x.size() - run);
}

}  // namespace fn

/// Evaluates a non-composite base function. simple_tsp and lsgo_composite
/// need instance data and are handled by make_function.
inline double evaluate_base(BaseFunction f, std::span<const double> x) {
  switch (f) {
    case BaseFunction::sphere:
      return fn::sphere(x);
    case BaseFunction::cigar:
      return fn::cigar(x);
    case BaseFunction::ellipsoid:
      return fn::ellipsoid(x);
    case BaseFunction::hm:
      return fn::hm(x);
    case BaseFunction::ackley:
      return fn::ackley(x);
    case BaseFunction::rosenbrock:
      return fn::rosenbrock(x);
    case BaseFunction::griewank:
      return fn::griewank(x);
    case BaseFunction::lunacek:
      return fn::lunacek(x);
    case BaseFunction::deceptive_multimodal:
      return fn::deceptive_multimodal(x);
    case BaseFunction::onemax:
      return fn::onemax(x);
    case BaseFunction::leadingones:
      return fn::leadingones(x);
    case BaseFunction::simple_tsp:
    case BaseFunction::lsgo_composite:
      break;
  }
  throw ConfigError("base function " + std::string(base_name(f)) + " needs instance data");
}

/// Analytic minimizer of a base function in dimension d, when it has one
/// independent of instance data.
inline std::optional<std::vector<double>> base_minimizer(BaseFunction f, std::size_t d) {
  switch (f) {
    case BaseFunction::rosenbrock:
      return std::vector<double>(d, 1.0);
    case BaseFunction::lunacek:
      return std::vector<double>(d, fn::kLunacekMu0);
    case BaseFunction::onemax:
    case BaseFunction::leadingones:
      return std::vector<double>(d, 1.0);
    case BaseFunction::simple_tsp:
    case BaseFunction::lsgo_composite:
      return std::nullopt;
    default:
      return std::vector<double>(d, 0.0);
  }
}

}  // namespace optbench::bench
