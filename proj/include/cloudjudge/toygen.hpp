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

#include <cstddef>
#include <cstdint>

#include "cloudjudge/model.hpp"

namespace cloudjudge {

/// Synthetic jets from iterated 1 -> 2 angular splittings. Not a parton
/// shower: it only promises varied, correlated, variable-size clouds with a
/// tunable number of prongs.
struct ToyConfig {
  std::size_t n_jets = 1000;
  std::size_t max_particles = kDefaultCapacity;
  double split_prob = 0.8;
  double angle_scale = 0.1;
  int prongs = 1;
  std::uint64_t rng_seed = 0;
};

void validate_config(const ToyConfig& cfg);

// Jet `index` of the sample; depends only on (cfg, index).
ParticleCloud generate_jet(const ToyConfig& cfg, std::size_t index);

CloudSample generate(const ToyConfig& cfg);

}  // namespace cloudjudge
