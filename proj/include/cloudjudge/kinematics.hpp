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
#include <vector>

#include "cloudjudge/model.hpp"

namespace cloudjudge {

/// Cartesian four-momentum (px, py, pz, E) in arbitrary consistent units.
struct FourMomentum {
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
  double e = 0.0;

  FourMomentum& operator+=(const FourMomentum& o) noexcept {
    px += o.px;
    py += o.py;
    pz += o.pz;
    e += o.e;
    return *this;
  }
};

struct PseudoAngular {
  double pt = 0.0;
  double eta = 0.0;
  double phi = 0.0;
};

// Throws DegenerateMomentum when the transverse momentum vanishes.
PseudoAngular to_pseudoangular(const FourMomentum& p);

// Massless four-momenta of the genuine particles, in slot order.
std::vector<FourMomentum> from_relative(const ParticleCloud& cloud);

// Relative invariant mass of the summed massless constituents.
double jet_mass(const ParticleCloud& cloud);

std::size_t cardinality(const ParticleCloud& cloud);

// Pixel grid over [-half_width, half_width]^2 in (eta_rel, phi_rel).
// Rows index eta, columns index phi.
struct JetImage {
  std::size_t resolution = 0;
  double half_width = 0.0;
  std::vector<double> pixels;  // row-major, resolution * resolution

  double at(std::size_t row, std::size_t col) const {
    return pixels[row * resolution + col];
  }
  double total() const;
};

inline constexpr std::size_t kDefaultImageResolution = 24;
inline constexpr double kDefaultImageHalfWidth = 0.4;

JetImage discretize(const ParticleCloud& cloud,
                    std::size_t resolution = kDefaultImageResolution,
                    double half_width = kDefaultImageHalfWidth);

}  // namespace cloudjudge
