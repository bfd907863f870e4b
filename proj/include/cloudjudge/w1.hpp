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
#include <span>
#include <string>
#include <vector>

#include "cloudjudge/efp.hpp"
#include "cloudjudge/model.hpp"

namespace cloudjudge {

struct W1Protocol {
  std::size_t batch_size = 10000;
  std::size_t n_batches = 5;
  std::uint64_t rng_seed = 0;
  // Re-run the first batch and fail with DeterminismViolation if it differs.
  bool check_determinism = false;
};

/// Mean and spread of a W1 distance over batches. The spread is the
/// population standard deviation across batches (0 for a single batch).
struct W1Score {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t batch_size = 0;  // after clamping
  std::vector<double> batches;
  std::vector<std::string> warnings;
};

// Exact 1-Wasserstein distance between two empirical distributions.
double w1_1d(std::span<const double> x, std::span<const double> y);
double w1_1d(const FeatureSeries& x, const FeatureSeries& y);

// Batched W1 between two per-jet scalar features (one value per cloud).
W1Score w1_per_jet(std::span<const double> real, std::span<const double> gen,
                   const W1Protocol& proto);

// Relative jet mass.
W1Score w1m(const CloudSample& real, const CloudSample& gen,
            const W1Protocol& proto);

// Mean of the eta_rel, phi_rel and pt_rel distances, particles pooled over
// the drawn jets.
W1Score w1p(const CloudSample& real, const CloudSample& gen,
            const W1Protocol& proto);

// Mean over the five 4-vertex, 4-edge EFPs.
W1Score w1efp(const CloudSample& real, const CloudSample& gen,
              const W1Protocol& proto, const EfpConfig& cfg = {});

struct BaselineScores {
  W1Score w1m;
  W1Score w1p;
  W1Score w1efp;
};

// Real-vs-real reference: two disjoint subsamples of `real` per batch.
BaselineScores baseline(const CloudSample& real, const W1Protocol& proto,
                        const EfpConfig& cfg = {});

}  // namespace cloudjudge
