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

// Shared helpers for the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "cloudjudge/model.hpp"

namespace cloudjudge::testing {

inline Particle genuine(double eta, double phi, double pt) {
  return Particle{eta, phi, pt, 1.0};
}

inline Particle padding() { return Particle{}; }

// A valid cloud with `n` genuine particles and the rest padded to capacity.
inline ParticleCloud random_cloud(std::mt19937_64& rng, std::size_t n,
                                  std::size_t capacity = kDefaultCapacity,
                                  double spread = 0.3) {
  std::normal_distribution<double> angle(0.0, spread);
  std::uniform_real_distribution<double> pt(0.01, 1.0);
  std::vector<Particle> slots;
  for (std::size_t i = 0; i < n; ++i) {
    slots.push_back(genuine(angle(rng), wrap_phi(angle(rng)), pt(rng)));
  }
  slots.resize(std::max(capacity, n), padding());
  return ParticleCloud(std::move(slots), std::max(capacity, n));
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng,
                                                   std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline ParticleCloud permuted(const ParticleCloud& c,
                              const std::vector<std::size_t>& perm) {
  std::vector<Particle> slots(c.slots().size());
  for (std::size_t i = 0; i < perm.size(); ++i) slots[i] = c.slots()[perm[i]];
  return ParticleCloud(std::move(slots), c.capacity());
}

inline ParticleCloud shuffled(std::mt19937_64& rng, const ParticleCloud& c) {
  return permuted(c, random_permutation(rng, c.slots().size()));
}

// Replaces padding with junk features so only the mask marks it as padding.
inline ParticleCloud with_junk_padding(std::mt19937_64& rng,
                                       const ParticleCloud& c) {
  std::uniform_real_distribution<double> junk(-5.0, 5.0);
  std::vector<Particle> slots = c.slots();
  for (auto& p : slots) {
    if (!p.genuine()) p = Particle{junk(rng), junk(rng), junk(rng), 0.0};
  }
  return ParticleCloud(std::move(slots), c.capacity());
}

inline CloudSample sample_of(std::vector<ParticleCloud> clouds,
                             JetClass label = JetClass::kOther) {
  CloudSample s;
  s.clouds = std::move(clouds);
  s.label = label;
  return s;
}

}  // namespace cloudjudge::testing
