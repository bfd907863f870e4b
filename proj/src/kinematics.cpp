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

#include "cloudjudge/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cloudjudge/error.hpp"

namespace cloudjudge {
namespace {

FourMomentum massless(const Particle& p) {
  return {p.pt_rel * std::cos(p.phi_rel), p.pt_rel * std::sin(p.phi_rel),
          p.pt_rel * std::sinh(p.eta_rel), p.pt_rel * std::cosh(p.eta_rel)};
}

// Negative m^2 up to this fraction of E^2 is round-off.
constexpr double kMassClampTolerance = 1e-12;

}  // namespace

PseudoAngular to_pseudoangular(const FourMomentum& p) {
  const double pt = std::hypot(p.px, p.py);
  if (pt == 0.0) {
    throw Error(ErrorCode::kDegenerateMomentum,
                "zero transverse momentum, pseudorapidity undefined");
  }
  // -log(tan(theta / 2)) == asinh(pz / pt), without the cancellation.
  return {pt, std::asinh(p.pz / pt), wrap_phi(std::atan2(p.py, p.px))};
}

std::vector<FourMomentum> from_relative(const ParticleCloud& cloud) {
  std::vector<FourMomentum> out;
  for (const auto& p : cloud.slots()) {
    if (p.genuine()) out.push_back(massless(p));
  }
  return out;
}

double jet_mass(const ParticleCloud& cloud) {
  FourMomentum sum;
  for (const auto& p : cloud.canonical_genuine()) sum += massless(p);
  const double m2 =
      sum.e * sum.e - (sum.px * sum.px + sum.py * sum.py + sum.pz * sum.pz);
  // Round-off of either sign (collinear constituents) reads as zero mass.
  if (std::abs(m2) <= kMassClampTolerance * sum.e * sum.e) return 0.0;
  if (m2 > 0.0) return std::sqrt(m2);
  throw Error(ErrorCode::kNumericalFailure,
              "jet mass squared is negative beyond round-off: " +
                  std::to_string(m2));
}

std::size_t cardinality(const ParticleCloud& cloud) {
  std::size_t n = 0;
  for (const auto& p : cloud.slots()) n += p.genuine() ? 1 : 0;
  return n;
}

double JetImage::total() const {
  return std::accumulate(pixels.begin(), pixels.end(), 0.0);
}

JetImage discretize(const ParticleCloud& cloud, std::size_t resolution,
                    double half_width) {
  if (resolution < 1 || !(half_width > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "discretize needs resolution >= 1 and half_width > 0");
  }
  JetImage image{resolution, half_width,
                 std::vector<double>(resolution * resolution, 0.0)};
  const double scale = static_cast<double>(resolution) / (2.0 * half_width);
  auto bin = [&](double x) -> long {
    if (x < -half_width || x > half_width) return -1;
    auto k = static_cast<long>(std::floor((x + half_width) * scale));
    return std::min<long>(k, static_cast<long>(resolution) - 1);
  };
  for (const auto& p : cloud.canonical_genuine()) {
    const long row = bin(p.eta_rel);
    const long col = bin(p.phi_rel);
    if (row < 0 || col < 0) continue;
    image.pixels[static_cast<std::size_t>(row) * resolution +
                 static_cast<std::size_t>(col)] += p.pt_rel;
  }
  return image;
}

}  // namespace cloudjudge
