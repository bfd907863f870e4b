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

#include "cloudjudge/covmmd.hpp"

#include <algorithm>
#include <vector>

#include "cloudjudge/error.hpp"
#include "cloudjudge/rng.hpp"

namespace cloudjudge {

Matching match_columns(const DistanceMatrix& xy) {
  if (xy.rows == 0 || xy.cols == 0) {
    throw Error(ErrorCode::kEmptySeries, "empty distance matrix");
  }
  std::vector<bool> matched(xy.rows, false);
  double total = 0.0;
  for (std::size_t j = 0; j < xy.cols; ++j) {
    double nearest = xy.at(0, j);
    for (std::size_t i = 1; i < xy.rows; ++i) nearest = std::min(nearest, xy.at(i, j));
    // Among exactly tied rows prefer the lowest unmatched one, else the
    // lowest. Identical clouds then cover each other one to one.
    std::size_t best = xy.rows;
    std::size_t first = xy.rows;
    for (std::size_t i = 0; i < xy.rows; ++i) {
      if (xy.at(i, j) != nearest) continue;
      if (first == xy.rows) first = i;
      if (!matched[i]) {
        best = i;
        break;
      }
    }
    if (best == xy.rows) best = first;
    matched[best] = true;
    total += xy.at(best, j);
  }
  const auto distinct = std::count(matched.begin(), matched.end(), true);
  return {static_cast<double>(distinct) / static_cast<double>(xy.rows),
          total / static_cast<double>(xy.cols)};
}

CovMmdScore cov_mmd(const CloudSample& x, const CloudSample& y,
                    const CovMmdProtocol& proto, const EmdConfig& cfg) {
  if (proto.subsample < 1 || proto.n_batches < 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "cov/mmd protocol needs subsample >= 1 and n_batches >= 1");
  }
  require_valid(x);
  require_valid(y);
  CovMmdScore out;
  out.subsample = proto.subsample;
  const std::size_t available = std::min(x.size(), y.size());
  if (available < out.subsample) {
    out.warnings.push_back("subsample clamped from " +
                           std::to_string(out.subsample) + " to " +
                           std::to_string(available));
    out.subsample = available;
  }
  // Batches run one after another; emd_matrix parallelizes within a batch.
  for (std::size_t b = 0; b < proto.n_batches; ++b) {
    CounterRng rng_x(proto.rng_seed, stream_id(StreamTag::kCovMmd, b));
    CounterRng rng_y(proto.rng_seed, stream_id(StreamTag::kCovMmd, b));
    const auto ix = draw_without_replacement(rng_x, x.size(), out.subsample);
    const auto iy = draw_without_replacement(rng_y, y.size(), out.subsample);
    const Matching m = match_columns(emd_matrix(x, ix, y, iy, cfg));
    out.cov_batches.push_back(m.cov);
    out.mmd_batches.push_back(m.mmd);
  }
  double cov = 0.0, mmd = 0.0;
  for (std::size_t b = 0; b < proto.n_batches; ++b) {
    cov += out.cov_batches[b];
    mmd += out.mmd_batches[b];
  }
  out.cov = cov / static_cast<double>(proto.n_batches);
  out.mmd = mmd / static_cast<double>(proto.n_batches);
  return out;
}

}  // namespace cloudjudge
