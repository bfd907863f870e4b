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

#include "cloudjudge/emd.hpp"
#include "cloudjudge/model.hpp"

namespace cloudjudge {

struct CovMmdProtocol {
  std::size_t subsample = 100;
  std::size_t n_batches = 10;
  std::uint64_t rng_seed = 0;
};

struct CovMmdScore {
  double cov = 0.0;
  double mmd = 0.0;
  std::size_t subsample = 0;  // after clamping
  std::vector<double> cov_batches;
  std::vector<double> mmd_batches;
  std::vector<std::string> warnings;
};

// Nearest neighbour FROM each y (column) TO the x draw (rows), columns in
// order; exact ties go to the lowest row not yet matched, else the lowest
// row. cov = distinct matched rows / rows, mmd = mean matched
// distance.
struct Matching {
  double cov = 0.0;
  double mmd = 0.0;
};
Matching match_columns(const DistanceMatrix& xy);

/// Coverage and minimum matching distance under EMD, averaged over batches.
/// Each batch draws `subsample` clouds from both samples (same stream).
CovMmdScore cov_mmd(const CloudSample& x, const CloudSample& y,
                    const CovMmdProtocol& proto, const EmdConfig& cfg = {});

}  // namespace cloudjudge
