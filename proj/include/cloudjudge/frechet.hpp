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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cloudjudge/efp.hpp"
#include "cloudjudge/model.hpp"

namespace cloudjudge {

// Dense row-major activations: one row per cloud.
struct ActivationMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * dim + c]; }
};

struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t n = 0;
};

// Column means and unbiased (N - 1) covariance.
GaussianSummary fit_gaussian(const ActivationMatrix& acts);

/// Frechet distance between two Gaussians,
///   |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2),
/// with matrix square roots taken through symmetric eigendecompositions.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

enum class ActivationKind { kExternalFile, kEfpSurrogate };

/// Where activations come from: rows read from activation files (one per
/// cloud of the matching sample), or the built-in surrogate feature vector.
struct ActivationProvider {
  ActivationKind kind = ActivationKind::kEfpSurrogate;
  ActivationMatrix real;
  ActivationMatrix gen;
  EfpConfig efp;

  static ActivationProvider external(ActivationMatrix real, ActivationMatrix gen);
  static ActivationProvider surrogate(const EfpConfig& efp = {});
};

inline constexpr std::size_t kSurrogateDim = 7;

// Surrogate activations: the five EFPs, relative jet mass and cardinality.
ActivationMatrix surrogate_activations(const CloudSample& sample,
                                       const std::vector<std::size_t>& index,
                                       const EfpConfig& efp = {});

struct FrechetProtocol {
  std::size_t n = 50000;
  std::uint64_t rng_seed = 0;
};

struct FrechetResult {
  double value = 0.0;
  ActivationKind kind = ActivationKind::kEfpSurrogate;
  std::size_t n_used = 0;
  std::vector<std::string> warnings;

  // "fpnd" for external activations, "frechet_surrogate" otherwise; the
  // surrogate is not comparable to classifier-based FPND values.
  const char* label() const;
};

FrechetResult fpnd(const CloudSample& real, const CloudSample& gen,
                   const ActivationProvider& provider,
                   const FrechetProtocol& proto = {});

}  // namespace cloudjudge
