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

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "optbench/bench/functions.hpp"
#include "optbench/core/optimizer.hpp"
#include "optbench/core/seed.hpp"

namespace optbench::bench {

struct TransformSpec {
  double translation_std = 0.0;
  bool far_optimum = false;
  bool rotate = false;
  bool symmetrize = false;
  double noise_std = 0.0;
  std::uint64_t transform_seed = 0;

  void validate() const {
    if (!(translation_std >= 0.0) || !std::isfinite(translation_std)) {
      throw ConfigError("translation_std must be a non-negative number");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise_std must be a non-negative number");
  }

  bool operator==(const TransformSpec&) const = default;
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
inline Eigen::MatrixXd random_rotation(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// Drawn transform: y = S M (x - t). Draw order is t, then M, then S.
struct Transform {
  Eigen::VectorXd shift;
  std::optional<Eigen::MatrixXd> rotation;
  std::optional<Eigen::VectorXd> signs;

  static Transform draw(const TransformSpec& spec, std::size_t d) {
    spec.validate();
    std::mt19937_64 rng(spec.transform_seed);
    std::normal_distribution<double> normal;
    Transform t;
    const double sigma = spec.translation_std * (spec.far_optimum ? 5.0 : 1.0);
    t.shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    if (sigma > 0.0) {
      for (Eigen::Index i = 0; i < t.shift.size(); ++i) t.shift(i) = sigma * normal(rng);
    }
    if (spec.rotate) t.rotation = random_rotation(d, rng);
    if (spec.symmetrize) {
      std::bernoulli_distribution coin(0.5);
      Eigen::VectorXd s(static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = coin(rng) ? 1.0 : -1.0;
      t.signs = std::move(s);
    }
    return t;
  }

  [[nodiscard]] Eigen::VectorXd apply(std::span<const double> x) const {
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) - shift;
    if (rotation) y = *rotation * y;
    if (signs) y = y.cwiseProduct(*signs);
    return y;
  }

  /// Preimage of y: x = t + M^T S y.
  [[nodiscard]] Eigen::VectorXd invert(const Eigen::VectorXd& y) const {
    Eigen::VectorXd z = signs ? Eigen::VectorXd(y.cwiseProduct(*signs)) : y;
    if (rotation) z = rotation->transpose() * z;
    return z + shift;
  }
};

struct CompositeBlock {
  BaseFunction base = BaseFunction::sphere;
  std::vector<std::size_t> indices;
  double weight = 1.0;
  TransformSpec transform;

  bool operator==(const CompositeBlock&) const = default;
};

/// Generator parameters of an LSGO-style composite whose blocks are drawn
/// from the instance seed.
struct CompositeGenerator {
  int blocks = 4;
  bool overlap = false;

  bool operator==(const CompositeGenerator&) const = default;
};

struct FunctionSpec {
  BaseFunction base = BaseFunction::sphere;
  std::size_t d = 1;
  TransformSpec transform;
  std::vector<CompositeBlock> blocks;
  std::optional<CompositeGenerator> generator;

  void validate() const {
    if (d < 1) throw ConfigError("function dimension must be >= 1");
    transform.validate();
    if (!is_continuous_base(base) && (transform.translation_std > 0.0 || transform.rotate || transform.symmetrize)) {
      throw ConfigError(std::string(base_name(base)) + " is discrete and takes no geometric transform");
    }
    if (base == BaseFunction::simple_tsp && d < 3) throw ConfigError("simple_tsp needs at least 3 cities");
    if (base == BaseFunction::lsgo_composite) {
      if (blocks.empty() && !generator) throw ConfigError("lsgo_composite needs blocks or a generator");
      for (const auto& b : blocks) {
        if (b.base == BaseFunction::lsgo_composite || !is_continuous_base(b.base)) {
          throw ConfigError("composite blocks must use continuous base functions");
        }
        if (b.indices.empty()) throw ConfigError("composite block without variables");
        for (auto i : b.indices) {
          if (i >= d) throw ConfigError("composite block index out of range");
        }
        if (b.weight == 0.0 || !std::isfinite(b.weight)) throw ConfigError("composite block weight must be nonzero");
        b.transform.validate();
      }
    }
  }

  bool operator==(const FunctionSpec&) const = default;
};

/// Block variable sets laid out along `order`: each block takes the next
/// `sizes[i]` positions; in overlap mode it starts max(1, floor(s/4))
/// positions before the end of the previous block of size s.
inline std::vector<std::vector<std::size_t>> place_blocks(const std::vector<std::size_t>& sizes, bool overlap,
                                                          const std::vector<std::size_t>& order) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (b > 0 && overlap) pos -= std::max<std::size_t>(1, sizes[b - 1] / 4);
    if (pos + sizes[b] > order.size()) throw ConfigError("composite blocks do not fit the dimension");
    std::vector<std::size_t> idx(order.begin() + static_cast<long>(pos), order.begin() + static_cast<long>(pos + sizes[b]));
    std::sort(idx.begin(), idx.end());
    out.push_back(std::move(idx));
    pos += sizes[b];
  }
  return out;
}

/// LSGO-style composite: `count` blocks with log-uniform sizes in
/// [2, d/2] over a random variable order, log-uniform weights in
/// [1e-3, 1e3], and a rotated, shifted base function per block.
inline FunctionSpec lsgo_composite(std::size_t d, int count, std::uint64_t transform_seed, bool overlap = false) {
  if (d < 4) throw ConfigError("lsgo_composite needs d >= 4");
  if (count < 1 || static_cast<std::size_t>(count) * 2 > d) {
    throw ConfigError("lsgo_composite: dimension " + std::to_string(d) + " is too small for " +
                      std::to_string(count) + " blocks");
  }
  std::mt19937_64 rng(derive_seed(transform_seed, {"lsgo"}));
  std::uniform_real_distribution<double> unit;
  const double lo = std::log(2.0);
  const double hi = std::log(static_cast<double>(d) / 2.0);
  std::vector<std::size_t> sizes;
  for (int i = 0; i < count; ++i) {
    const double s = std::exp(lo + (hi - lo) * unit(rng));
    sizes.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(s)), 2, d / 2));
  }
  // Furthest position any block reaches.
  auto span = [&] {
    std::size_t pos = 0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (overlap && i > 0) pos -= std::max<std::size_t>(1, sizes[i - 1] / 4);
      end = std::max(end, pos + sizes[i]);
      pos += sizes[i];
    }
    return end;
  };
  while (span() > d) {
    auto largest = std::max_element(sizes.begin(), sizes.end());
    if (*largest <= 2) throw ConfigError("composite blocks do not fit the dimension");
    --*largest;
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto sets = place_blocks(sizes, overlap, order);

  static constexpr BaseFunction kChoices[] = {BaseFunction::ellipsoid, BaseFunction::rosenbrock,
                                              BaseFunction::ackley, BaseFunction::sphere};
  FunctionSpec spec;
  spec.base = BaseFunction::lsgo_composite;
  spec.d = d;
  spec.transform.transform_seed = transform_seed;
  for (int i = 0; i < count; ++i) {
    CompositeBlock b;
    b.base = kChoices[std::uniform_int_distribution<int>(0, 3)(rng)];
    b.indices = sets[static_cast<std::size_t>(i)];
    b.weight = std::pow(10.0, -3.0 + 6.0 * unit(rng));
    b.transform.translation_std = 1.0;
    b.transform.rotate = true;
    b.transform.transform_seed = derive_seed(transform_seed, {"block", i});
    spec.blocks.push_back(std::move(b));
  }
  return spec;
}

inline FunctionSpec simple_tsp(std::size_t cities, std::uint64_t seed) {
  if (cities < 3) throw ConfigError("simple_tsp needs at least 3 cities");
  FunctionSpec spec;
  spec.base = BaseFunction::simple_tsp;
  spec.d = cities;
  spec.transform.transform_seed = seed;
  return spec;
}

/// Decodes a SimpleTSP encoding: variable i picks the next city among the
/// cities not yet visited, in increasing index order.
inline std::vector<std::size_t> decode_tour(std::span<const double> x) {
  std::vector<std::size_t> remaining(x.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<std::size_t> tour;
  tour.reserve(x.size());
  for (double v : x) {
    const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(0.0, v)), 0, remaining.size() - 1);
    tour.push_back(remaining[k]);
    remaining.erase(remaining.begin() + static_cast<long>(k));
  }
  return tour;
}

inline double tour_length(const std::vector<std::array<double, 2>>& cities, const std::vector<std::size_t>& tour) {
  double len = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    const auto& a = cities[tour[i]];
    const auto& b = cities[tour[(i + 1) % tour.size()]];
    len += std::hypot(a[0] - b[0], a[1] - b[1]);
  }
  return len;
}

inline std::vector<std::array<double, 2>> tsp_cities(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  std::vector<std::array<double, 2>> out(n);
  for (auto& c : out) {
    c[0] = unit(rng);
    c[1] = unit(rng);
  }
  return out;
}

inline DomainSpec function_domain(const FunctionSpec& spec) {
  switch (spec.base) {
    case BaseFunction::onemax:
    case BaseFunction::leadingones:
      return DomainSpec::binary(spec.d);
    case BaseFunction::simple_tsp: {
      std::vector<VariableKind> kinds;
      for (std::size_t i = 0; i < spec.d; ++i) kinds.emplace_back(Integer{0, static_cast<std::int64_t>(spec.d - 1 - i)});
      return DomainSpec(std::move(kinds));
    }
    default:
      return DomainSpec::continuous(spec.d);
  }
}

/// A benchmark instance: g(x) = f(S M (x - t)) + noise_std * N(0, 1), with
/// a private noise stream, and the noise-free g0 for scoring.
class BenchFunction final : public Evaluable {
 public:
  BenchFunction(FunctionSpec spec, std::uint64_t noise_seed)
      : spec_(std::move(spec)), domain_((spec_.validate(), function_domain(spec_))), noise_(noise_seed) {
    if (spec_.base == BaseFunction::lsgo_composite && spec_.blocks.empty()) {
      const auto generated =
          lsgo_composite(spec_.d, spec_.generator->blocks, spec_.transform.transform_seed, spec_.generator->overlap);
      spec_.blocks = generated.blocks;
    }
    if (is_continuous_base(spec_.base)) transform_ = Transform::draw(spec_.transform, spec_.d);
    for (const auto& b : spec_.blocks) block_transforms_.push_back(Transform::draw(b.transform, b.indices.size()));
    if (spec_.base == BaseFunction::simple_tsp) cities_ = tsp_cities(spec_.d, spec_.transform.transform_seed);
    compute_minimizer();
  }

  [[nodiscard]] const FunctionSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const Transform& transform() const noexcept { return transform_; }
  [[nodiscard]] const DomainSpec& domain() const override { return domain_; }
  [[nodiscard]] bool noisy() const override { return spec_.transform.noise_std > 0.0; }
  [[nodiscard]] std::optional<double> known_minimum() const override {
    if (minimizer_) return 0.0;
    return std::nullopt;
  }
  /// Location of the noise-free minimum, when known.
  [[nodiscard]] const std::optional<std::vector<double>>& minimizer() const noexcept { return minimizer_; }
  [[nodiscard]] const std::vector<std::array<double, 2>>& cities() const noexcept { return cities_; }

  double evaluate(std::span<const double> x) override {
    const double v = noise_free(x);
    if (spec_.transform.noise_std == 0.0) return v;
    return v + spec_.transform.noise_std * normal_(noise_);
  }

  double noise_free(std::span<const double> x) override {
    if (x.size() != spec_.d) throw ContractError("point has the wrong dimension");
    switch (spec_.base) {
      case BaseFunction::simple_tsp:
        return tour_length(cities_, decode_tour(x));
      case BaseFunction::onemax:
      case BaseFunction::leadingones:
        return evaluate_base(spec_.base, x);
      case BaseFunction::lsgo_composite:
        return composite(transform_.apply(x));
      default:
        break;
    }
    const Eigen::VectorXd y = transform_.apply(x);
    return evaluate_base(spec_.base, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
  }

 private:
  // Blocks use their base function recentred so that the block minimum sits
  // at the block shift.
  [[nodiscard]] double composite(const Eigen::VectorXd& y) const {
    double total = 0.0;
    std::vector<double> sub;
    for (std::size_t i = 0; i < spec_.blocks.size(); ++i) {
      const auto& b = spec_.blocks[i];
      sub.resize(b.indices.size());
      for (std::size_t k = 0; k < sub.size(); ++k) sub[k] = y(static_cast<Eigen::Index>(b.indices[k]));
      Eigen::VectorXd z = block_transforms_[i].apply(sub);
      const auto centre = *base_minimizer(b.base, sub.size());
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) += centre[static_cast<std::size_t>(k)];
      total += b.weight * evaluate_base(b.base, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
    }
    return total;
  }

  void compute_minimizer() {
    if (spec_.base == BaseFunction::simple_tsp) return;
    if (spec_.base == BaseFunction::onemax || spec_.base == BaseFunction::leadingones) {
      minimizer_ = base_minimizer(spec_.base, spec_.d);
      return;
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec_.d));
    if (spec_.base == BaseFunction::lsgo_composite) {
      // Known only when every shared variable is asked for the same value.
      for (const auto& b : spec_.blocks) {
        if (b.weight < 0.0) return;
      }
      std::vector<std::optional<double>> want(spec_.d);
      for (std::size_t i = 0; i < spec_.blocks.size(); ++i) {
        const auto& b = spec_.blocks[i];
        for (std::size_t k = 0; k < b.indices.size(); ++k) {
          const double v = block_transforms_[i].shift(static_cast<Eigen::Index>(k));
          auto& slot = want[b.indices[k]];
          if (slot && *slot != v) return;
          slot = v;
        }
      }
      for (std::size_t j = 0; j < spec_.d; ++j) y(static_cast<Eigen::Index>(j)) = want[j].value_or(0.0);
    } else {
      const auto z = *base_minimizer(spec_.base, spec_.d);
      y = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
    }
    const Eigen::VectorXd x = transform_.invert(y);
    minimizer_ = std::vector<double>(x.data(), x.data() + x.size());
  }

  FunctionSpec spec_;
  DomainSpec domain_;
  Transform transform_;
  std::vector<Transform> block_transforms_;
  std::vector<std::array<double, 2>> cities_;
  std::optional<std::vector<double>> minimizer_;
  std::mt19937_64 noise_;
  std::normal_distribution<double> normal_;
};

inline std::unique_ptr<BenchFunction> make_function(const FunctionSpec& spec, std::uint64_t noise_seed = 0) {
  return std::make_unique<BenchFunction>(spec, noise_seed);
}

}  // namespace optbench::bench
