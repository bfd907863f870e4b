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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cloudjudge/frechet.hpp"
#include "cloudjudge/model.hpp"
#include "cloudjudge/mplayer.hpp"

namespace cloudjudge {

/*
 * Cloud file ("JNP1"), all integers little-endian:
 *
 *   offset  size  field
 *        0     4  magic "JNP1"
 *        4     4  version (1)
 *        8     4  n_jets
 *       12     4  capacity (slots per jet)
 *       16     4  n_features (4)
 *       20     1  label code (JetClass)
 *       21     3  reserved, zero
 *       24        n_jets * capacity * 4 float32: eta_rel, phi_rel, pt_rel, mask
 *
 * Masked slots are written as zeros.
 *
 * Activation file ("JACT"): magic, n_rows (u32), dim (u32), then
 * n_rows * dim float32 row-major. Row i belongs to cloud i of the
 * matching cloud file.
 */
inline constexpr std::uint32_t kCloudFileVersion = 1;
inline constexpr std::size_t kCloudHeaderSize = 24;
inline constexpr std::size_t kActivationHeaderSize = 12;

std::vector<std::uint8_t> encode_clouds(const CloudSample& sample);
CloudSample decode_clouds(std::span<const std::uint8_t> bytes);

void write_clouds(const CloudSample& sample, const std::filesystem::path& path);
CloudSample read_clouds(const std::filesystem::path& path);

// Header "jet_id,slot,eta_rel,phi_rel,pt_rel,mask", one line per slot,
// floats with 9 significant digits. CSV carries no jet class.
std::string encode_csv(const CloudSample& sample);
CloudSample decode_csv(const std::string& text,
                       JetClass label = JetClass::kOther);

void write_csv(const CloudSample& sample, const std::filesystem::path& path);
CloudSample read_csv(const std::filesystem::path& path,
                     JetClass label = JetClass::kOther);

std::vector<std::uint8_t> encode_activations(const ActivationMatrix& acts);
ActivationMatrix decode_activations(std::span<const std::uint8_t> bytes);

void write_activations(const ActivationMatrix& acts,
                       const std::filesystem::path& path);
ActivationMatrix read_activations(const std::filesystem::path& path);

// Feature-map parameters packed into a single-column activation file:
// [n_layers, dims..., output activation code, then per layer W (row-major)
// followed by b]. Values are stored as float32.
ActivationMatrix pack_feature_map(const FeatureMap& map);
FeatureMap unpack_feature_map(const ActivationMatrix& packed);

// Formats a double with 9 significant digits.
std::string format_g9(double value);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace cloudjudge
