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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "cloudjudge/error.hpp"

namespace cloudjudge {

enum class Activation : std::uint8_t {
  kIdentity = 0,
  kLeakyRelu = 1,
  kTanh = 2,
  kSigmoid = 3,
};

inline constexpr double kLeakySlope = 0.2;

// Fully connected layer y = W x + b, W stored out x in row-major.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;
};

template <class T>
T activate(Activation a, const T& x) {
  using std::exp;
  using std::tanh;
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kLeakyRelu: return x > 0.0 ? x : kLeakySlope * x;
    case Activation::kTanh: return tanh(x);
    case Activation::kSigmoid: return 1.0 / (1.0 + exp(-x));
  }
  return x;
}

/// MLP with leaky-rectifier hidden layers and a configurable output
/// activation.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(std::vector<DenseLayer> layers,
             Activation output = Activation::kIdentity);

  std::size_t input_dim() const noexcept {
    return layers_.empty() ? 0 : layers_.front().in;
  }
  std::size_t output_dim() const noexcept {
    return layers_.empty() ? 0 : layers_.back().out;
  }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  Activation output_activation() const noexcept { return output_; }

  template <class T>
  std::vector<T> apply(std::span<const T> x) const {
    if (x.size() != input_dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "feature map input size");
    }
    std::vector<T> cur(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const DenseLayer& layer = layers_[l];
      const Activation act =
          l + 1 == layers_.size() ? output_ : Activation::kLeakyRelu;
      std::vector<T> next(layer.out);
      for (std::size_t o = 0; o < layer.out; ++o) {
        T acc = T(layer.bias[o]);
        const double* w = layer.weight.data() + o * layer.in;
        for (std::size_t i = 0; i < layer.in; ++i) acc = acc + w[i] * cur[i];
        next[o] = activate(act, acc);
      }
      cur = std::move(next);
    }
    return cur;
  }

 private:
  std::vector<DenseLayer> layers_;
  Activation output_ = Activation::kIdentity;
};

/// Seeded weights: every weight and bias of layer l is drawn uniformly from
/// [-sqrt(1 / fan_in), sqrt(1 / fan_in)] on the (seed, l) stream.
FeatureMap init_feature_map(std::span<const std::size_t> dims,
                            std::uint64_t seed,
                            Activation output = Activation::kIdentity);

/// Per-particle features h_i (N x H, row-major) with a genuine/padding mask.
template <class T>
struct BasicMpState {
  std::size_t n = 0;
  std::size_t h = 0;
  std::vector<T> features;
  std::vector<std::uint8_t> mask;

  std::span<const T> row(std::size_t i) const {
    return {features.data() + i * h, h};
  }
};

using MpState = BasicMpState<double>;

struct MpOptions {
  // Include the j == i term in the message sum.
  bool self_message = true;
};

namespace detail {

template <class T>
void check_state(const BasicMpState<T>& s) {
  if (s.features.size() != s.n * s.h || s.mask.size() != s.n) {
    throw Error(ErrorCode::kDimensionMismatch, "message-passing state shape");
  }
  for (auto m : s.mask) {
    if (m > 1) throw Error(ErrorCode::kValidationFailure, "mask not binary");
  }
}

// Genuine rows ordered lexicographically by feature values. Summing in this
// order makes the result independent of the row permutation.
template <class T>
std::vector<std::size_t> canonical_rows(const BasicMpState<T>& s) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < s.n; ++i) {
    if (s.mask[i]) rows.push_back(i);
  }
  std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = s.row(a);
    const auto rb = s.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                        rb.end());
  });
  return rows;
}

}  // namespace detail

/// One message-passing iteration over the fully connected graph of genuine
/// particles: m_ij = f_e(h_i ++ h_j), h'_i = f_n(h_i ++ sum_j m_ij).
/// Padding rows neither send nor receive and come out as zeros.
template <class T>
BasicMpState<T> mp_forward(const BasicMpState<T>& state, const FeatureMap& f_e,
                           const FeatureMap& f_n, const MpOptions& opts = {}) {
  detail::check_state(state);
  const std::size_t h = state.h;
  const std::size_t e = f_e.output_dim();
  if (f_e.input_dim() != 2 * h || f_n.input_dim() != h + e) {
    throw Error(ErrorCode::kDimensionMismatch,
                "edge/node feature maps do not match the state width");
  }
  BasicMpState<T> out;
  out.n = state.n;
  out.h = f_n.output_dim();
  out.features.assign(out.n * out.h, T(0.0));
  out.mask = state.mask;

  const auto order = detail::canonical_rows(state);
  std::vector<T> pair(2 * h);
  std::vector<T> node(h + e);
  for (std::size_t i : order) {
    const auto hi = state.row(i);
    std::vector<T> sum(e, T(0.0));
    for (std::size_t j : order) {
      if (!opts.self_message && j == i) continue;
      const auto hj = state.row(j);
      std::copy(hi.begin(), hi.end(), pair.begin());
      std::copy(hj.begin(), hj.end(), pair.begin() + static_cast<long>(h));
      const auto msg = f_e.apply<T>(pair);
      for (std::size_t k = 0; k < e; ++k) sum[k] = sum[k] + msg[k];
    }
    std::copy(hi.begin(), hi.end(), node.begin());
    std::copy(sum.begin(), sum.end(), node.begin() + static_cast<long>(h));
    const auto updated = f_n.apply<T>(node);
    std::copy(updated.begin(), updated.end(),
              out.features.begin() + static_cast<long>(i * out.h));
  }
  return out;
}

// Feature-wise mean over genuine rows.
template <class T>
std::vector<T> mp_pool(const BasicMpState<T>& state) {
  detail::check_state(state);
  const auto order = detail::canonical_rows(state);
  if (order.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "pooling needs a genuine row");
  }
  std::vector<T> out(state.h, T(0.0));
  for (std::size_t i : order) {
    const auto r = state.row(i);
    for (std::size_t k = 0; k < state.h; ++k) out[k] = out[k] + r[k];
  }
  for (auto& v : out) v = v / static_cast<double>(order.size());
  return out;
}

}  // namespace cloudjudge
