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

// Deterministic seed derivation.
//
// derive_seed(master, labels) folds each label into a SplitMix64 state:
//
//   h = mix(master)
//   for label in labels: h = mix(h ^ fnv1a(tag(label) || bytes(label)))
//
// where mix is the SplitMix64 output function applied to (state + golden
// gamma). With no labels the result is the first SplitMix64 output for the
// master seed, so derive_seed(0, {}) == 0xE220A8397B1DCDAF, the reference
// vector of the generator.

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optbench {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t state) noexcept {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// One element of a seed derivation path: either a string or an integer.
/// Strings and integers with the same textual form hash differently.
class SeedLabel {
 public:
  SeedLabel(std::string_view text) : hash_(hash_bytes('s', text)) {}
  SeedLabel(const std::string& text) : hash_(hash_bytes('s', text)) {}
  SeedLabel(const char* text) : hash_(hash_bytes('s', text)) {}
  template <std::integral T>
  SeedLabel(T value) : hash_(hash_integer(static_cast<std::int64_t>(value))) {}

  [[nodiscard]] std::uint64_t hash() const noexcept { return hash_; }

 private:
  static constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
  static constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

  static std::uint64_t hash_bytes(char tag, std::string_view text) noexcept {
    std::uint64_t h = kFnvOffset;
    h = (h ^ static_cast<unsigned char>(tag)) * kFnvPrime;
    for (char c : text) h = (h ^ static_cast<unsigned char>(c)) * kFnvPrime;
    return h;
  }

  static std::uint64_t hash_integer(std::int64_t value) noexcept {
    std::uint64_t h = kFnvOffset;
    h = (h ^ static_cast<unsigned char>('i')) * kFnvPrime;
    auto bits = static_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) {
      h = (h ^ ((bits >> (8 * i)) & 0xFFU)) * kFnvPrime;
    }
    return h;
  }

  std::uint64_t hash_;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::span<const SeedLabel> labels) noexcept {
  std::uint64_t h = splitmix64(master);
  for (const auto& label : labels) h = splitmix64(h ^ label.hash());
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<SeedLabel> labels) noexcept {
  return derive_seed(master, std::span<const SeedLabel>(labels.begin(), labels.size()));
}

inline std::uint64_t derive_seed(std::uint64_t master, const std::vector<SeedLabel>& labels) noexcept {
  return derive_seed(master, std::span<const SeedLabel>(labels));
}

}  // namespace optbench
