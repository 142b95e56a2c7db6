// Copyright 2026 The collabnet Authors
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

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace collabnet {

/// SplitMix64 run in counter mode.
///
/// The i-th output of stream (seed, stream) is mix64(key + i * 0x9E3779B97F4A7C15)
/// with key = mix64(seed) ^ mix64(stream ^ 0xD1B54A32D192ED03). Every draw below
/// is defined on top of next_u64() with explicit formulas (no std distributions),
/// so fixtures regenerate bit-identically in any language.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static std::uint64_t mix64(std::uint64_t z);

  std::uint64_t next_u64();
  /// (next_u64() >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// Multiply-high reduction of next_u64() into [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Box-Muller, cosine branch, two uniforms per draw.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Knuth's product method for lambda <= 30; rounded normal approximation above.
  std::uint64_t poisson(double lambda);
  double exponential(double rate);
  /// Continuous power law with density exponent alpha > 1 above x_min (inverse CDF).
  double pareto(double alpha, double x_min);

  /// Partial Fisher-Yates: k distinct indices from [0, n), in draw order.
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// FNV-1a 64-bit; used to derive named sub-streams and config hashes.
std::uint64_t fnv1a64(std::string_view text);

/// Seed for a named component derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view component);

}  // namespace collabnet
