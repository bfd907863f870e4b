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

#include "cloudjudge/toygen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cloudjudge/error.hpp"
#include "cloudjudge/parallel.hpp"
#include "cloudjudge/rng.hpp"

namespace cloudjudge {
namespace {

struct Seed {
  double eta;
  double phi;
  double pt;
};

// Prong seeds: equal-pt particles spaced evenly on a circle of radius
// angle_scale around the axis, under a random rotation. Equal shares and a
// fixed radius pin the unshowered mass, so jets whose shower is refused at
// once form a separate mode below the showered continuum.
std::vector<Seed> prong_seeds(const ToyConfig& cfg, CounterRng& rng) {
  if (cfg.prongs == 1) return {{0.0, 0.0, 1.0}};
  const double rotation = rng.uniform(0.0, 2.0 * kPi);
  const double share = 1.0 / cfg.prongs;
  std::vector<Seed> seeds;
  for (int k = 0; k < cfg.prongs; ++k) {
    const double psi = rotation + 2.0 * kPi * k / cfg.prongs;
    seeds.push_back({cfg.angle_scale * std::cos(psi),
                     cfg.angle_scale * std::sin(psi), share});
  }
  return seeds;
}

}  // namespace

void validate_config(const ToyConfig& cfg) {
  if (cfg.n_jets < 1) {
    throw Error(ErrorCode::kConfigInvalid, "toy n_jets must be >= 1");
  }
  if (cfg.prongs < 1 || cfg.prongs > 3) {
    throw Error(ErrorCode::kConfigInvalid, "toy prongs must be 1, 2 or 3");
  }
  if (cfg.max_particles < static_cast<std::size_t>(cfg.prongs)) {
    throw Error(ErrorCode::kConfigInvalid, "toy max_particles < prongs");
  }
  if (!(cfg.split_prob >= 0.0 && cfg.split_prob <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "toy split_prob must be in [0, 1]");
  }
  if (!(cfg.angle_scale > 0.0) || !std::isfinite(cfg.angle_scale)) {
    throw Error(ErrorCode::kConfigInvalid, "toy angle_scale must be > 0");
  }
}

ParticleCloud generate_jet(const ToyConfig& cfg, std::size_t index) {
  CounterRng rng(cfg.rng_seed, stream_id(StreamTag::kToyJet, index));
  std::vector<Seed> parts = prong_seeds(cfg, rng);

  while (parts.size() < cfg.max_particles) {
    if (!(rng.uniform() < cfg.split_prob)) break;
    auto hardest = std::max_element(
        parts.begin(), parts.end(),
        [](const Seed& a, const Seed& b) { return a.pt < b.pt; });
    const Seed parent = *hardest;
    const double z = rng.uniform(0.1, 0.9);
    const double d = rng.exponential(cfg.angle_scale);
    const double psi = rng.uniform(0.0, 2.0 * kPi);
    // Daughter offsets weighted by the other daughter's fraction keep the
    // pt-weighted centroid on the parent.
    *hardest = {parent.eta + (1.0 - z) * d * std::cos(psi),
                parent.phi + (1.0 - z) * d * std::sin(psi), z * parent.pt};
    parts.push_back({parent.eta - z * d * std::cos(psi),
                     parent.phi - z * d * std::sin(psi),
                     (1.0 - z) * parent.pt});
  }

  double total = 0.0;
  for (const auto& p : parts) total += p.pt;
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Seed& a, const Seed& b) { return a.pt > b.pt; });
  std::vector<Particle> slots(cfg.max_particles);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    slots[i] = {parts[i].eta, wrap_phi(parts[i].phi), parts[i].pt / total, 1.0};
  }
  return canonicalize(ParticleCloud(std::move(slots), cfg.max_particles));
}

CloudSample generate(const ToyConfig& cfg) {
  validate_config(cfg);
  CloudSample sample;
  sample.label = JetClass::kToy;
  sample.seed = cfg.rng_seed;
  sample.clouds.resize(cfg.n_jets);
  parallel_for(cfg.n_jets,
               [&](std::size_t i) { sample.clouds[i] = generate_jet(cfg, i); });
  return sample;
}

}  // namespace cloudjudge
