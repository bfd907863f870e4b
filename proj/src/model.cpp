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

#include "cloudjudge/model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cloudjudge/error.hpp"

namespace cloudjudge {

double wrap_phi(double phi) noexcept {
  // remainder() is exact, so values already in range come back unchanged.
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r = kPi;
  return r;
}

ParticleCloud::ParticleCloud(std::vector<Particle> slots, std::size_t capacity)
    : slots_(std::move(slots)), capacity_(capacity) {}

ParticleCloud::ParticleCloud(std::vector<Particle> slots)
    : slots_(std::move(slots)),
      capacity_(std::max(kDefaultCapacity, slots_.size())) {}

std::vector<Particle> ParticleCloud::genuine() const {
  std::vector<Particle> out;
  out.reserve(slots_.size());
  for (const auto& p : slots_) {
    if (p.genuine()) out.push_back(p);
  }
  return out;
}

std::vector<Particle> ParticleCloud::canonical_genuine() const {
  auto out = genuine();
  std::sort(out.begin(), out.end(), [](const Particle& a, const Particle& b) {
    return std::tie(a.pt_rel, a.eta_rel, a.phi_rel) <
           std::tie(b.pt_rel, b.eta_rel, b.phi_rel);
  });
  return out;
}

const char* to_string(JetClass label) {
  switch (label) {
    case JetClass::kGluon: return "gluon";
    case JetClass::kLightQuark: return "light_quark";
    case JetClass::kTopQuark: return "top_quark";
    case JetClass::kToy: return "toy";
    case JetClass::kOther: return "other";
  }
  return "other";
}

std::string Violation::message() const {
  if (!slot) return rule;
  return rule + " at slot " + std::to_string(*slot);
}

std::vector<Violation> validate(const ParticleCloud& cloud) {
  std::vector<Violation> out;
  const auto& slots = cloud.slots();
  if (slots.size() > cloud.capacity()) {
    out.push_back({std::nullopt, "slot count exceeds capacity"});
  }
  bool any_genuine = false;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Particle& p = slots[i];
    if (p.mask != 0.0 && p.mask != 1.0) {
      out.push_back({i, "mask not binary"});
      continue;
    }
    if (!p.genuine()) continue;
    any_genuine = true;
    if (!std::isfinite(p.eta_rel) || !std::isfinite(p.phi_rel) ||
        !std::isfinite(p.pt_rel)) {
      out.push_back({i, "non-finite feature"});
      continue;
    }
    if (p.pt_rel < 0.0) out.push_back({i, "negative pt_rel"});
    if (!(p.phi_rel > -kPi && p.phi_rel <= kPi)) {
      out.push_back({i, "phi_rel outside (-pi, pi]"});
    }
  }
  if (!any_genuine) out.push_back({std::nullopt, "no unmasked particles"});
  return out;
}

std::vector<std::string> validate(const CloudSample& sample) {
  std::vector<std::string> out;
  if (sample.clouds.empty()) {
    out.emplace_back("sample is empty");
    return out;
  }
  const std::size_t capacity = sample.clouds.front().capacity();
  for (std::size_t j = 0; j < sample.clouds.size(); ++j) {
    const auto& cloud = sample.clouds[j];
    if (cloud.capacity() != capacity) {
      out.push_back("jet " + std::to_string(j) + ": capacity " +
                    std::to_string(cloud.capacity()) + " differs from " +
                    std::to_string(capacity));
    }
    for (const auto& v : validate(cloud)) {
      out.push_back("jet " + std::to_string(j) + ": " + v.message());
    }
  }
  return out;
}

void require_valid(const ParticleCloud& cloud) {
  const auto violations = validate(cloud);
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailure, violations.front().message());
  }
}

void require_valid(const CloudSample& sample) {
  const auto problems = validate(sample);
  if (!problems.empty()) {
    throw Error(ErrorCode::kValidationFailure, problems.front());
  }
}

ParticleCloud canonicalize(const ParticleCloud& cloud) {
  std::vector<Particle> slots = cloud.slots();
  for (auto& p : slots) {
    if (p.mask == 0.0) {
      p = Particle{};
    } else {
      p.phi_rel = wrap_phi(p.phi_rel);
    }
  }
  return ParticleCloud(std::move(slots), cloud.capacity());
}

}  // namespace cloudjudge
