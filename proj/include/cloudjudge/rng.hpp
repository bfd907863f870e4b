// Copyright 2026 The CloudJudge Authors
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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace cloudjudge {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output k of stream (seed, stream) is
/// mix64(key + k * 0x9e3779b97f4a7c15) with key = mix64(seed ^ mix64(stream)),
/// k = 1, 2, ... Every derived quantity (uniforms, exponentials, draws) is
/// built from these words with the fixed recipes below, so any language can
/// reproduce a stream bit for bit.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(seed ^ mix64(stream))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  double exponential(double mean) noexcept {
    return -mean * std::log1p(-uniform());
  }

  // Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream identifiers. A stream is derived from (purpose, index) so that
// batches and jets get independent, schedule-free substreams.
enum class StreamTag : std::uint64_t {
  kW1Draw = 1,
  kBaseline = 2,
  kCovMmd = 3,
  kFrechet = 4,
  kToyJet = 5,
  kWeights = 6,
};

constexpr std::uint64_t stream_id(StreamTag tag, std::uint64_t index) noexcept {
  return mix64(static_cast<std::uint64_t>(tag) * 0x100000001b3ULL ^
               mix64(index + 0x51ed27ULL));
}

/// First `count` entries of a seeded partial Fisher-Yates shuffle of
/// 0..population-1 (sampling without replacement).
inline std::vector<std::size_t> draw_without_replacement(
    CounterRng& rng, std::size_t population, std::size_t count) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (count > population) count = population;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(population - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace cloudjudge
