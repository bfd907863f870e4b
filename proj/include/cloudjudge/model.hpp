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
#include <optional>
#include <string>
#include <vector>

namespace cloudjudge {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr std::size_t kDefaultCapacity = 30;

/// One particle slot: (eta_rel, phi_rel, pt_rel, mask). A slot with
/// mask == 0 is zero padding and is ignored by every observable and metric.
struct Particle {
  double eta_rel = 0.0;
  double phi_rel = 0.0;
  double pt_rel = 0.0;
  double mask = 0.0;

  bool genuine() const noexcept { return mask == 1.0; }

  friend bool operator==(const Particle&, const Particle&) = default;
};

// Wraps an angle into (-pi, pi].
double wrap_phi(double phi) noexcept;

/// One jet: a fixed number of particle slots, at most `capacity`.
class ParticleCloud {
 public:
  ParticleCloud() = default;
  ParticleCloud(std::vector<Particle> slots, std::size_t capacity);
  explicit ParticleCloud(std::vector<Particle> slots);

  const std::vector<Particle>& slots() const noexcept { return slots_; }
  std::size_t capacity() const noexcept { return capacity_; }

  // Genuine particles in slot order.
  std::vector<Particle> genuine() const;

  // Genuine particles in a canonical order (lexicographic on pt, eta, phi).
  // Observables accumulate in this order, which makes them exactly invariant
  // under slot permutations.
  std::vector<Particle> canonical_genuine() const;

  friend bool operator==(const ParticleCloud&, const ParticleCloud&) = default;

 private:
  std::vector<Particle> slots_;
  std::size_t capacity_ = kDefaultCapacity;
};

enum class JetClass : std::uint8_t {
  kGluon = 0,
  kLightQuark = 1,
  kTopQuark = 2,
  kToy = 3,
  kOther = 4,
};

const char* to_string(JetClass label);

struct CloudSample {
  std::vector<ParticleCloud> clouds;
  JetClass label = JetClass::kOther;
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return clouds.size(); }
  std::size_t capacity() const noexcept {
    return clouds.empty() ? 0 : clouds.front().capacity();
  }
  const ParticleCloud& operator[](std::size_t i) const { return clouds[i]; }

  friend bool operator==(const CloudSample&, const CloudSample&) = default;
};

/// A named list of finite scalars, e.g. one jet observable per cloud.
struct FeatureSeries {
  std::string name;
  std::vector<double> values;
};

// A violated cloud invariant. `slot` is absent for whole-cloud rules.
struct Violation {
  std::optional<std::size_t> slot;
  std::string rule;

  std::string message() const;
};

std::vector<Violation> validate(const ParticleCloud& cloud);

// Empty iff every cloud is valid, the sample is non-empty and all clouds
// share one capacity. Messages carry the jet index.
std::vector<std::string> validate(const CloudSample& sample);

// Throws ValidationFailure naming the first problem.
void require_valid(const ParticleCloud& cloud);
void require_valid(const CloudSample& sample);

/// Wraps phi_rel into (-pi, pi] and zeroes masked slots. Genuine slots keep
/// their relative order. Idempotent.
ParticleCloud canonicalize(const ParticleCloud& cloud);

}  // namespace cloudjudge
