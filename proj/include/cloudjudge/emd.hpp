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
#include <span>
#include <vector>

#include "cloudjudge/model.hpp"

namespace cloudjudge {

inline constexpr double kDefaultJetRadius = 0.8;

struct EmdConfig {
  double radius = kDefaultJetRadius;
};

/// Optimal flow between the genuine particles of two clouds. Rows follow
/// the genuine particles of the source in slot order, columns those of the
/// target. Energy that cannot be transported is created or destroyed at
/// unit cost.
struct TransportPlan {
  std::size_t n_source = 0;
  std::size_t n_target = 0;
  std::vector<double> flow;  // row-major n_source * n_target
  double objective = 0.0;
  double dual_objective = 0.0;
  double created_total = 0.0;
  double destroyed_total = 0.0;

  double at(std::size_t i, std::size_t j) const {
    return flow[i * n_target + j];
  }
};

struct EmdResult {
  double distance = 0.0;
  TransportPlan plan;
};

/// Energy mover's distance:
///   min_f sum_ij f_ij theta_ij / R + |sum_i pt_i - sum_j pt_j|
/// subject to row sums <= source pt, column sums <= target pt and total
/// flow = min of the two totals. Solved exactly.
EmdResult emd(const ParticleCloud& a, const ParticleCloud& b,
              const EmdConfig& cfg = {});

// Distance only; skips building the plan.
double emd_distance(const ParticleCloud& a, const ParticleCloud& b,
                    const EmdConfig& cfg = {});

struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Pairwise distances, entry (i, j) = emd(xs[i], ys[j]).
DistanceMatrix emd_matrix(const CloudSample& xs, const CloudSample& ys,
                          const EmdConfig& cfg = {});

// Same, restricted to the listed clouds of each sample.
DistanceMatrix emd_matrix(const CloudSample& xs,
                          std::span<const std::size_t> x_index,
                          const CloudSample& ys,
                          std::span<const std::size_t> y_index,
                          const EmdConfig& cfg = {});

/// Result of a balanced transportation solve together with the dual
/// potentials that certify optimality.
struct TransportSolution {
  std::vector<double> flow;  // row-major supply.size() * demand.size()
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  double primal = 0.0;
  double dual = 0.0;
  double max_negative_reduced_cost = 0.0;
  std::size_t pivots = 0;
};

// Balanced transportation problem (sum supply == sum demand up to
// round-off). Throws SolverFailure if the certificate does not close.
TransportSolution solve_transportation(std::span<const double> supply,
                                       std::span<const double> demand,
                                       std::span<const double> cost);

}  // namespace cloudjudge
