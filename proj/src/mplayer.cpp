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

#include "cloudjudge/mplayer.hpp"

#include <string>

#include "cloudjudge/rng.hpp"

namespace cloudjudge {

FeatureMap::FeatureMap(std::vector<DenseLayer> layers, Activation output)
    : layers_(std::move(layers)), output_(output) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.weight.size() != layer.in * layer.out ||
        layer.bias.size() != layer.out) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "layer " + std::to_string(l) + " parameter shape");
    }
    if (l > 0 && layers_[l - 1].out != layer.in) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "layer " + std::to_string(l) + " input does not match");
    }
    for (double w : layer.weight) {
      if (!std::isfinite(w)) {
        throw Error(ErrorCode::kValidationFailure, "non-finite weight");
      }
    }
  }
}

FeatureMap init_feature_map(std::span<const std::size_t> dims,
                            std::uint64_t seed, Activation output) {
  if (dims.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "feature map needs >= 2 dims");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) {
      throw Error(ErrorCode::kInvalidArgument, "feature map dims must be > 0");
    }
    DenseLayer layer{dims[l], dims[l + 1], {}, {}};
    const double bound = std::sqrt(1.0 / static_cast<double>(layer.in));
    CounterRng rng(seed, stream_id(StreamTag::kWeights, l));
    layer.weight.resize(layer.in * layer.out);
    for (auto& w : layer.weight) w = rng.uniform(-bound, bound);
    layer.bias.resize(layer.out);
    for (auto& b : layer.bias) b = rng.uniform(-bound, bound);
    layers.push_back(std::move(layer));
  }
  return FeatureMap(std::move(layers), output);
}

}  // namespace cloudjudge
